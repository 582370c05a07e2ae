#pragma once

#include <array>
#include <string>
#include <vector>

#include "handsynth/geometry.hpp"

namespace handsynth {

inline constexpr int kNumJoints = 21;

// Keypoint order: wrist = 0, then thumb 1-4, index 5-8, middle 9-12,
// ring 13-16, pinky 17-20 (base joint to tip within each chain).
enum JointIndex : int {
  kWrist = 0,
  kThumbCmc = 1,
  kThumbMcp = 2,
  kThumbIp = 3,
  kThumbTip = 4,
  kIndexMcp = 5,
  kIndexPip = 6,
  kIndexDip = 7,
  kIndexTip = 8,
  kMiddleMcp = 9,
  kMiddlePip = 10,
  kMiddleDip = 11,
  kMiddleTip = 12,
  kRingMcp = 13,
  kRingPip = 14,
  kRingDip = 15,
  kRingTip = 16,
  kPinkyMcp = 17,
  kPinkyPip = 18,
  kPinkyDip = 19,
  kPinkyTip = 20,
};

enum class Handedness { Right, Left };
enum class Gender { Male, Female };

std::string to_string(Handedness h);
std::string to_string(Gender g);
Handedness handedness_from_string(const std::string& s);
Gender gender_from_string(const std::string& s);

struct JointSpec {
  std::string name;
  int parent = -1;            // -1 for the root
  Vec3 rest_offset{0, 0, 0};  // meters, in the parent joint's frame
};

// Per-gender sizing applied to the shared template.
struct GenderScale {
  double overall = 1.0;        // whole-hand scale
  double finger_length = 1.0;  // finger segment lengths
  double finger_width = 1.0;   // mesh radii only
};

struct HandSkeleton {
  std::array<JointSpec, kNumJoints> joints;
  Handedness handedness = Handedness::Right;
  Gender gender = Gender::Female;
  GenderScale scale;
  double arm_length = 0.0;  // meters; forearm segment, not an annotated joint

  // Rest-pose world position of the elbow end of the forearm (valid when
  // arm_length > 0). Local frame: fingers +Y, so the arm extends along -Y.
  Vec3 arm_rest_offset() const { return {0.0, -arm_length, 0.0}; }
};

struct Pose {
  std::array<Quat, kNumJoints> rotations;  // local, per joint
  Quat wrist_rotation = Quat::identity();  // global transform of the root
  Vec3 wrist_translation{0, 0, 0};

  static Pose identity();
};

struct FkResult {
  std::array<Vec3, kNumJoints> positions;               // world, meters
  std::array<RigidTransform, kNumJoints> world_frames;  // per-joint frames
};

// Default gender presets. The female template is the base; male scales it.
GenderScale gender_scale_defaults(Gender g);

// Builds the right-hand skeleton in topological order. arm_length >= 0;
// a forearm is present iff arm_length > 0 and is never one of the 21 joints.
HandSkeleton build_skeleton(Gender gender, double arm_length,
                            const GenderScale* scale_override = nullptr);

// Composes parent-chain rigid transforms: frame_i = frame_parent ∘
// translate(rest_offset_i) ∘ rotate(q_i); the root composes the pose's
// global wrist transform first. Throws std::invalid_argument if any
// quaternion is not unit length (1e-9).
FkResult forward_kinematics(const HandSkeleton& skeleton, const Pose& pose);

// x-negated skeleton/pose (YZ-plane mirror); flips handedness.
HandSkeleton mirror(const HandSkeleton& s);
Pose mirror(const Pose& p);

// Per-joint intrinsic-XYZ Euler bounds, radians.
struct JointLimit {
  double rx_min, rx_max;
  double ry_min, ry_max;
  double rz_min, rz_max;
};

struct JointLimits {
  std::array<JointLimit, kNumJoints> limits;

  static JointLimits defaults();

  bool check(const Pose& pose) const;
  // Index of the first violating joint, or -1.
  int first_violation(const Pose& pose) const;
};

}  // namespace handsynth
