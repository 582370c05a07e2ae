#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "handsynth/skeleton.hpp"

namespace handsynth {

// Part ids recorded per vertex so geometric checks can find the segment a
// vertex belongs to: finger segments use the child joint index, plus:
inline constexpr int kPartPalm = 100;
inline constexpr int kPartArm = 101;

struct BoneInfluence {
  int joint = 0;
  double weight = 0.0;
};

struct MeshBuildConfig {
  // Capsule radii at the proximal end of each phalanx, by chain
  // (thumb, index, middle, ring, pinky); tip ends taper by taper_ratio.
  std::array<double, 5> chain_radius{0.0085, 0.0075, 0.0078, 0.0072, 0.0062};
  double taper_ratio = 0.82;
  double metacarpal_radius = 0.008;  // wrist -> knuckle bones, inside the palm
  double arm_radius = 0.017;
  Vec3 palm_center{-0.001, 0.047, 0.0005};
  Vec3 palm_half_extents{0.041, 0.054, 0.0095};
  double joint_blend = 0.35;  // fraction of a segment blended toward the next joint
  int capsule_sides = 10;
  int capsule_rings = 5;
  int cap_rings = 3;
  int palm_slices = 18;
  int palm_stacks = 12;

  static MeshBuildConfig defaults() { return {}; }

  // Proximal radius of the segment ending at child joint c, after gender
  // width scaling. Returns 0 for non-segment joints (the wrist).
  double segment_radius(const HandSkeleton& s, int child_joint) const;
};

struct SkinnedMesh {
  std::vector<Vec3> vertices;  // rest pose, meters
  std::vector<Vec3> normals;   // rest pose, unit
  std::vector<std::array<uint32_t, 3>> triangles;
  std::vector<std::array<BoneInfluence, 4>> influences;  // weights sum to 1
  std::vector<int> part_ids;
  std::array<RigidTransform, kNumJoints> bind_inverse;  // rest world frame inverses
};

// Capsule per bone segment plus a palm volume; every vertex is weighted to
// its segment's frame joint with blending near joints.
SkinnedMesh build_mesh(const HandSkeleton& skeleton, const MeshBuildConfig& config = {});

// Skin transforms for a posed skeleton: world frame composed with the
// inverse bind frame. Identity pose yields identity transforms.
std::array<RigidTransform, kNumJoints> skinning_transforms(const SkinnedMesh& mesh,
                                                           const FkResult& fk);

struct PosedMesh {
  std::vector<Vec3> vertices;
  std::vector<Vec3> normals;
};

// Linear blend skinning: v' = sum_b w_b * T_b(v). Throws
// std::invalid_argument if the transform span is not kNumJoints long.
PosedMesh skin_mesh(const SkinnedMesh& mesh, std::span<const RigidTransform> transforms);

// Distance from a point to the segment [a, b].
double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b);

}  // namespace handsynth
