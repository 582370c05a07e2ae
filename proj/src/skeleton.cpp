#include "handsynth/skeleton.hpp"

#include <cmath>
#include <stdexcept>

namespace handsynth {

std::string to_string(Handedness h) { return h == Handedness::Right ? "right" : "left"; }
std::string to_string(Gender g) { return g == Gender::Male ? "male" : "female"; }

Handedness handedness_from_string(const std::string& s) {
  if (s == "right") return Handedness::Right;
  if (s == "left") return Handedness::Left;
  throw std::invalid_argument("unknown handedness: " + s);
}

Gender gender_from_string(const std::string& s) {
  if (s == "male") return Gender::Male;
  if (s == "female") return Gender::Female;
  throw std::invalid_argument("unknown gender: " + s);
}

Pose Pose::identity() {
  Pose p;
  p.rotations.fill(Quat::identity());
  return p;
}

GenderScale gender_scale_defaults(Gender g) {
  if (g == Gender::Male) return {1.09, 1.04, 1.14};
  return {1.0, 1.0, 1.0};
}

namespace {

struct TemplateJoint {
  const char* name;
  int parent;
  Vec3 offset;  // female base, meters
  bool finger_segment;
};

// Right hand, wrist at origin, fingers along +Y, thumb side +X,
// palm facing -Z. Chain-base offsets place the knuckles; within-chain
// offsets are the phalanx vectors.
constexpr double kT = 1.0;  // template authored at female scale
const TemplateJoint kTemplate[kNumJoints] = {
    {"wrist", -1, {0.0, 0.0, 0.0}, false},
    // Thumb: base at the radial side of the palm, pointing out diagonally.
    {"thumb_cmc", 0, {0.027 * kT, 0.022 * kT, -0.006 * kT}, false},
    {"thumb_mcp", 1, {0.021 * kT, 0.027 * kT, -0.007 * kT}, true},
    {"thumb_ip", 2, {0.013 * kT, 0.023 * kT, -0.003 * kT}, true},
    {"thumb_tip", 3, {0.010 * kT, 0.019 * kT, 0.0}, true},
    // Index.
    {"index_mcp", 0, {0.024 * kT, 0.088 * kT, 0.0}, false},
    {"index_pip", 5, {0.001 * kT, 0.040 * kT, 0.0}, true},
    {"index_dip", 6, {0.0, 0.025 * kT, 0.0}, true},
    {"index_tip", 7, {0.0, 0.021 * kT, 0.0}, true},
    // Middle.
    {"middle_mcp", 0, {0.002 * kT, 0.092 * kT, 0.0}, false},
    {"middle_pip", 9, {0.0, 0.044 * kT, 0.0}, true},
    {"middle_dip", 10, {0.0, 0.028 * kT, 0.0}, true},
    {"middle_tip", 11, {0.0, 0.023 * kT, 0.0}, true},
    // Ring.
    {"ring_mcp", 0, {-0.018 * kT, 0.088 * kT, 0.0}, false},
    {"ring_pip", 13, {-0.001 * kT, 0.041 * kT, 0.0}, true},
    {"ring_dip", 14, {0.0, 0.026 * kT, 0.0}, true},
    {"ring_tip", 15, {0.0, 0.022 * kT, 0.0}, true},
    // Pinky.
    {"pinky_mcp", 0, {-0.036 * kT, 0.078 * kT, 0.0}, false},
    {"pinky_pip", 17, {-0.002 * kT, 0.032 * kT, 0.0}, true},
    {"pinky_dip", 18, {0.0, 0.020 * kT, 0.0}, true},
    {"pinky_tip", 19, {0.0, 0.018 * kT, 0.0}, true},
};

}  // namespace

HandSkeleton build_skeleton(Gender gender, double arm_length, const GenderScale* scale_override) {
  if (arm_length < 0.0) throw std::invalid_argument("arm_length must be >= 0");
  HandSkeleton s;
  s.handedness = Handedness::Right;
  s.gender = gender;
  s.scale = scale_override ? *scale_override : gender_scale_defaults(gender);
  s.arm_length = arm_length;
  for (int i = 0; i < kNumJoints; ++i) {
    const TemplateJoint& t = kTemplate[i];
    double k = s.scale.overall * (t.finger_segment ? s.scale.finger_length : 1.0);
    s.joints[i] = JointSpec{t.name, t.parent, t.offset * k};
  }
  return s;
}

FkResult forward_kinematics(const HandSkeleton& skeleton, const Pose& pose) {
  for (const Quat& q : pose.rotations)
    if (std::fabs(q.norm() - 1.0) > 1e-9)
      throw std::invalid_argument("pose quaternion is not unit length");
  if (std::fabs(pose.wrist_rotation.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("wrist rotation is not unit length");

  FkResult out;
  RigidTransform global{pose.wrist_rotation, pose.wrist_translation};
  for (int i = 0; i < kNumJoints; ++i) {
    const JointSpec& j = skeleton.joints[i];
    RigidTransform local{pose.rotations[i], j.rest_offset};
    if (j.parent < 0)
      out.world_frames[i] = global.compose(local);
    else
      out.world_frames[i] = out.world_frames[j.parent].compose(local);
    out.positions[i] = out.world_frames[i].t;
  }
  return out;
}

HandSkeleton mirror(const HandSkeleton& s) {
  HandSkeleton m = s;
  m.handedness = s.handedness == Handedness::Right ? Handedness::Left : Handedness::Right;
  for (auto& j : m.joints) j.rest_offset = mirror_x(j.rest_offset);
  return m;
}

Pose mirror(const Pose& p) {
  Pose m = p;
  for (auto& q : m.rotations) q = mirror_x(q);
  m.wrist_rotation = mirror_x(p.wrist_rotation);
  m.wrist_translation = mirror_x(p.wrist_translation);
  return m;
}

JointLimits JointLimits::defaults() {
  JointLimits jl;
  auto deg = [](double lo, double hi, double ylo, double yhi, double zlo, double zhi) {
    return JointLimit{deg_to_rad(lo), deg_to_rad(hi), deg_to_rad(ylo),
                      deg_to_rad(yhi), deg_to_rad(zlo), deg_to_rad(zhi)};
  };
  // Flexion is a negative X rotation in this rig (curls +Y toward -Z).
  JointLimit wrist = deg(-180, 180, -180, 180, -180, 180);
  JointLimit mcp = deg(-120, 40, -40, 40, -40, 40);
  JointLimit pip = deg(-125, 15, -20, 20, -20, 20);
  JointLimit dip = deg(-100, 15, -20, 20, -20, 20);
  JointLimit tip = deg(-15, 15, -15, 15, -15, 15);
  JointLimit thumb = deg(-120, 120, -120, 120, -120, 120);
  for (int i = 0; i < kNumJoints; ++i) {
    if (i == kWrist)
      jl.limits[i] = wrist;
    else if (i <= kThumbTip)
      jl.limits[i] = thumb;
    else {
      int within = (i - 1) % 4;  // 0=mcp 1=pip 2=dip 3=tip
      jl.limits[i] = within == 0 ? mcp : within == 1 ? pip : within == 2 ? dip : tip;
    }
  }
  return jl;
}

bool JointLimits::check(const Pose& pose) const { return first_violation(pose) < 0; }

int JointLimits::first_violation(const Pose& pose) const {
  for (int i = 0; i < kNumJoints; ++i) {
    EulerXYZ e = to_euler_xyz(pose.rotations[i]);
    const JointLimit& l = limits[i];
    if (e.rx < l.rx_min || e.rx > l.rx_max || e.ry < l.ry_min || e.ry > l.ry_max ||
        e.rz < l.rz_min || e.rz > l.rz_max)
      return i;
  }
  return -1;
}

}  // namespace handsynth
