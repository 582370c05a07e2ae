#include "handsynth/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace handsynth {

double MeshBuildConfig::segment_radius(const HandSkeleton& s, int child_joint) const {
  if (child_joint <= 0 || child_joint >= kNumJoints) return 0.0;
  double width = s.scale.overall * s.scale.finger_width;
  int chain = (child_joint - 1) / 4;
  int within = (child_joint - 1) % 4;  // 0 = chain base (inside palm)
  if (within == 0) return metacarpal_radius * width;
  double r = chain_radius[static_cast<size_t>(chain)] * width;
  // Successive phalanges narrow toward the tip.
  for (int k = 1; k < within; ++k) r *= taper_ratio;
  return r;
}

namespace {

// Orthonormal frame with +Y along dir.
void segment_frame(const Vec3& dir, Vec3& ex, Vec3& ey, Vec3& ez) {
  ey = normalized(dir);
  Vec3 ref = std::fabs(ey.z) < 0.9 ? Vec3{0, 0, 1} : Vec3{1, 0, 0};
  ex = normalized(cross(ey, ref));
  ez = cross(ex, ey);
}

struct MeshBuilder {
  SkinnedMesh mesh;

  uint32_t add_vertex(const Vec3& p, const Vec3& n, const std::array<BoneInfluence, 4>& infl,
                      int part) {
    mesh.vertices.push_back(p);
    mesh.normals.push_back(n);
    mesh.influences.push_back(infl);
    mesh.part_ids.push_back(part);
    return static_cast<uint32_t>(mesh.vertices.size() - 1);
  }

  void add_triangle(uint32_t a, uint32_t b, uint32_t c) { mesh.triangles.push_back({a, b, c}); }

  // Tapered capsule from a to b. Weights start on frame_joint and blend
  // toward blend_joint over the distal part of the shaft and the far cap.
  void add_capsule(const Vec3& a, const Vec3& b, double ra, double rb, int frame_joint,
                   int blend_joint, double blend_zone, int part, const MeshBuildConfig& cfg) {
    Vec3 ex, ey, ez;
    Vec3 axis = b - a;
    double len = norm(axis);
    segment_frame(axis, ex, ey, ez);

    auto influence_at = [&](double s) {
      std::array<BoneInfluence, 4> infl{};
      double wb = 0.0;
      if (blend_joint >= 0 && blend_zone > 0.0 && s > 1.0 - blend_zone) {
        double u = (s - (1.0 - blend_zone)) / blend_zone;  // 0..1
        wb = 0.5 * u * u * (3.0 - 2.0 * u);                // smoothstep, max 0.5
      }
      infl[0] = {frame_joint, 1.0 - wb};
      infl[1] = {blend_joint >= 0 ? blend_joint : frame_joint, wb};
      return infl;
    };

    int sides = cfg.capsule_sides;
    std::vector<std::vector<uint32_t>> rings;

    // axis_sign = sin(latitude): 0 on the shaft, ±1 at the poles.
    auto add_ring = [&](const Vec3& center, double radius, double axis_sign, double s) {
      std::vector<uint32_t> ring(static_cast<size_t>(sides));
      auto infl = influence_at(s);
      for (int i = 0; i < sides; ++i) {
        double t = 2.0 * kPi * i / sides;
        Vec3 radial = ex * std::cos(t) + ez * std::sin(t);
        Vec3 p = center + radial * radius;
        Vec3 n = normalized(radial * std::sqrt(std::max(0.0, 1.0 - axis_sign * axis_sign)) +
                            ey * axis_sign);
        ring[i] = add_vertex(p, n, infl, part);
      }
      rings.push_back(std::move(ring));
    };

    // Bottom pole.
    uint32_t bottom_pole = add_vertex(a - ey * ra, -ey, influence_at(0.0), part);
    // Bottom hemisphere rings.
    for (int k = 1; k <= cfg.cap_rings; ++k) {
      double phi = (kPi / 2.0) * (1.0 - static_cast<double>(k) / (cfg.cap_rings + 1));
      // phi: angle below the equator plane.
      double rr = ra * std::cos(phi);
      double off = ra * std::sin(phi);
      add_ring(a - ey * off, rr, -std::sin(phi), 0.0);
    }
    // Shaft rings.
    for (int k = 0; k <= cfg.capsule_rings; ++k) {
      double s = static_cast<double>(k) / cfg.capsule_rings;
      double rr = ra + (rb - ra) * s;
      add_ring(a + ey * (len * s), rr, 0.0, s);
    }
    // Top hemisphere rings.
    for (int k = 1; k <= cfg.cap_rings; ++k) {
      double phi = (kPi / 2.0) * static_cast<double>(k) / (cfg.cap_rings + 1);
      double rr = rb * std::cos(phi);
      double off = rb * std::sin(phi);
      add_ring(b + ey * off, rr, std::sin(phi), 1.0);
    }
    uint32_t top_pole = add_vertex(b + ey * rb, ey, influence_at(1.0), part);

    // Stitch: pole fans and ring-to-ring quads.
    const auto& first = rings.front();
    for (int i = 0; i < sides; ++i)
      add_triangle(bottom_pole, first[(i + 1) % sides], first[i]);
    for (size_t rix = 0; rix + 1 < rings.size(); ++rix) {
      const auto& r0 = rings[rix];
      const auto& r1 = rings[rix + 1];
      for (int i = 0; i < sides; ++i) {
        int j = (i + 1) % sides;
        add_triangle(r0[i], r0[j], r1[j]);
        add_triangle(r0[i], r1[j], r1[i]);
      }
    }
    const auto& last = rings.back();
    for (int i = 0; i < sides; ++i)
      add_triangle(top_pole, last[i], last[(i + 1) % sides]);
  }

  void add_ellipsoid(const Vec3& center, const Vec3& half, int joint, int part,
                     const MeshBuildConfig& cfg) {
    std::array<BoneInfluence, 4> infl{};
    infl[0] = {joint, 1.0};
    int slices = cfg.palm_slices, stacks = cfg.palm_stacks;
    uint32_t top = add_vertex(center + Vec3{0, half.y, 0}, {0, 1, 0}, infl, part);
    uint32_t bottom = add_vertex(center - Vec3{0, half.y, 0}, {0, -1, 0}, infl, part);
    std::vector<std::vector<uint32_t>> rings;
    for (int k = 1; k < stacks; ++k) {
      double phi = kPi * k / stacks;  // from +Y pole
      std::vector<uint32_t> ring(static_cast<size_t>(slices));
      for (int i = 0; i < slices; ++i) {
        double t = 2.0 * kPi * i / slices;
        Vec3 unit{std::sin(phi) * std::cos(t), std::cos(phi), std::sin(phi) * std::sin(t)};
        Vec3 p{center.x + half.x * unit.x, center.y + half.y * unit.y,
               center.z + half.z * unit.z};
        Vec3 n = normalized(
            {unit.x / half.x, unit.y / half.y, unit.z / half.z});
        ring[i] = add_vertex(p, n, infl, part);
      }
      rings.push_back(std::move(ring));
    }
    const auto& first = rings.front();
    for (int i = 0; i < slices; ++i) add_triangle(top, first[i], first[(i + 1) % slices]);
    for (size_t rix = 0; rix + 1 < rings.size(); ++rix) {
      const auto& r0 = rings[rix];
      const auto& r1 = rings[rix + 1];
      for (int i = 0; i < slices; ++i) {
        int j = (i + 1) % slices;
        add_triangle(r0[i], r1[j], r0[j]);
        add_triangle(r0[i], r1[i], r1[j]);
      }
    }
    const auto& last = rings.back();
    for (int i = 0; i < slices; ++i) add_triangle(bottom, last[(i + 1) % slices], last[i]);
  }
};

}  // namespace

SkinnedMesh build_mesh(const HandSkeleton& skeleton, const MeshBuildConfig& config) {
  MeshBuilder b;

  FkResult rest = forward_kinematics(skeleton, Pose::identity());
  for (int i = 0; i < kNumJoints; ++i) b.mesh.bind_inverse[i] = rest.world_frames[i].inverse();

  double scale = skeleton.scale.overall;

  // One capsule per bone segment. The segment parent->child rides the
  // parent joint's frame and blends toward the child frame near the joint.
  for (int c = 1; c < kNumJoints; ++c) {
    int p = skeleton.joints[c].parent;
    double r1 = config.segment_radius(skeleton, c);
    int within = (c - 1) % 4;
    bool has_tip_taper = within == 3;
    double r2 = has_tip_taper ? r1 * config.taper_ratio : r1;
    b.add_capsule(rest.positions[p], rest.positions[c], r1, r2, p, c, config.joint_blend, c,
                  config);
  }

  // Palm volume, rigid with the wrist.
  Vec3 palm_center = config.palm_center * scale;
  Vec3 palm_half = config.palm_half_extents * scale;
  double width = skeleton.scale.finger_width;
  palm_half.z *= width;
  if (skeleton.handedness == Handedness::Left) palm_center = mirror_x(palm_center);
  b.add_ellipsoid(palm_center, palm_half, kWrist, kPartPalm, config);

  // Optional forearm, also rigid with the wrist.
  if (skeleton.arm_length > 0.0) {
    Vec3 elbow = skeleton.arm_rest_offset();
    if (skeleton.handedness == Handedness::Left) elbow = mirror_x(elbow);
    b.add_capsule(Vec3{0, 0, 0}, elbow, config.arm_radius * scale, config.arm_radius * scale,
                  kWrist, -1, 0.0, kPartArm, config);
  }

  return std::move(b.mesh);
}

std::array<RigidTransform, kNumJoints> skinning_transforms(const SkinnedMesh& mesh,
                                                           const FkResult& fk) {
  std::array<RigidTransform, kNumJoints> out;
  for (int i = 0; i < kNumJoints; ++i) out[i] = fk.world_frames[i].compose(mesh.bind_inverse[i]);
  return out;
}

PosedMesh skin_mesh(const SkinnedMesh& mesh, std::span<const RigidTransform> transforms) {
  if (transforms.size() != kNumJoints)
    throw std::invalid_argument("skin_mesh: expected one transform per joint");
  PosedMesh out;
  out.vertices.resize(mesh.vertices.size());
  out.normals.resize(mesh.normals.size());
  for (size_t v = 0; v < mesh.vertices.size(); ++v) {
    Vec3 pos{0, 0, 0};
    Vec3 nrm{0, 0, 0};
    for (const BoneInfluence& inf : mesh.influences[v]) {
      if (inf.weight == 0.0) continue;
      const RigidTransform& t = transforms[static_cast<size_t>(inf.joint)];
      pos += t.apply(mesh.vertices[v]) * inf.weight;
      nrm += t.r.rotate(mesh.normals[v]) * inf.weight;
    }
    out.vertices[v] = pos;
    out.normals[v] = normalized(nrm);
  }
  return out;
}

double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
  Vec3 ab = b - a;
  double len2 = dot(ab, ab);
  double t = len2 > 0.0 ? std::clamp(dot(p - a, ab) / len2, 0.0, 1.0) : 0.0;
  return norm(p - (a + ab * t));
}

}  // namespace handsynth
