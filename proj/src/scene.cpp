#include "handsynth/scene.hpp"

#include <cmath>
#include <stdexcept>

#include "handsynth/errors.hpp"
#include "handsynth/rng.hpp"

namespace handsynth {

namespace {

Vec3 centroid(const FkResult& fk) {
  Vec3 c{};
  for (const Vec3& p : fk.positions) c += p;
  return c / static_cast<double>(fk.positions.size());
}

CameraConfig sample_camera(Rng& rng, const CameraRanges& r, int resolution) {
  CameraConfig cam;
  cam.radius = rng.uniform(r.radius_min, r.radius_max);
  cam.azimuth = rng.uniform(0.0, 2.0 * kPi);
  const double el = deg_to_rad(r.elevation_max_deg);
  cam.elevation = rng.uniform(-el, el);
  const double jmax = deg_to_rad(r.jitter_max_deg);
  cam.jitter = {rng.uniform(-jmax, jmax), rng.uniform(-jmax, jmax), rng.uniform(-jmax, jmax)};
  cam.vertical_fov = deg_to_rad(rng.uniform(r.fov_min_deg, r.fov_max_deg));
  cam.exposure_ev = rng.uniform(r.exposure_min_ev, r.exposure_max_ev);
  cam.resolution = resolution;
  return cam;
}

HandSkeleton skeleton_for(const SampleSpec& spec, const GenerationConfig& cfg) {
  const GenderScale& scale =
      spec.gender == Gender::Male ? cfg.male_scale : cfg.female_scale;
  HandSkeleton skel = build_skeleton(spec.gender, cfg.arm_length, &scale);
  if (spec.handedness == Handedness::Left) skel = mirror(skel);
  return skel;
}

Pose blended_pose(const SampleSpec& spec, const PoseLibrary& lib) {
  const LibraryEntry& a = lib.entry(spec.pose_a);
  const LibraryEntry& b = lib.entry(spec.pose_b);
  Pose pose = interpolate(lib.evaluate(a, spec.blend_t), lib.evaluate(b, spec.blend_t),
                          spec.blend_t);
  if (spec.handedness == Handedness::Left) pose = mirror(pose);
  return pose;
}

}  // namespace

double framing_fraction(std::span<const Vec2> keypoints_2d, int resolution) {
  int inside = 0;
  for (const Vec2& p : keypoints_2d) {
    if (p.x >= 0.0 && p.x < resolution && p.y >= 0.0 && p.y < resolution) ++inside;
  }
  return keypoints_2d.empty() ? 0.0
                              : static_cast<double>(inside) / static_cast<double>(keypoints_2d.size());
}

bool accept_camera(const Camera& camera, const FkResult& fk, double min_framing) {
  if (camera.to_camera(centroid(fk)).z <= 0.0) return false;
  std::array<Vec2, kNumJoints> px;
  for (int i = 0; i < kNumJoints; ++i) {
    const Vec3 c = camera.to_camera(fk.positions[i]);
    if (c.z <= 0.0) return false;  // any keypoint behind the camera is hopeless framing
    px[i] = project(c, camera.vertical_fov, camera.resolution);
  }
  return framing_fraction(px, camera.resolution) >= min_framing;
}

SampleSpec sample_spec(uint64_t seed, const GenerationConfig& config, const PoseLibrary& library,
                       int forced_cell) {
  if (config.environments.empty()) {
    throw std::invalid_argument("config lists no environments");
  }
  const int n_tones = static_cast<int>(config.tones.anchors.size());

  SampleSpec spec;
  spec.seed = seed;
  Rng rng(derive_seed(seed, kStreamSpec));
  spec.pose_a = library.entry(rng.uniform_index(library.size())).name;
  spec.pose_b = library.entry(rng.uniform_index(library.size())).name;
  spec.blend_t = rng.uniform();
  if (forced_cell >= 0) {
    spec.gender = (forced_cell / n_tones) % 2 == 0 ? Gender::Male : Gender::Female;
    spec.tone_index = forced_cell % n_tones;
    rng.next_u64();  // keep the draw count identical either way
    rng.next_u64();
  } else {
    spec.gender = rng.bernoulli(0.5) ? Gender::Male : Gender::Female;
    spec.tone_index = static_cast<int>(rng.uniform_index(static_cast<uint64_t>(n_tones)));
  }
  spec.handedness = rng.bernoulli(0.5) ? Handedness::Right : Handedness::Left;
  spec.environment_id =
      config.environments[rng.uniform_index(config.environments.size())];
  spec.env_rotation_z = rng.uniform(0.0, 2.0 * kPi);

  const HandSkeleton skel = skeleton_for(spec, config);
  const Pose pose = blended_pose(spec, library);
  const FkResult fk = forward_kinematics(skel, pose);
  const Vec3 target = centroid(fk);

  for (int attempt = 0; attempt < config.sampler.max_attempts; ++attempt) {
    Rng crng(derive_seed(seed, kStreamCamera, static_cast<uint64_t>(attempt)));
    spec.camera = sample_camera(crng, config.camera, config.render.resolution);
    const Camera cam = make_camera(spec.camera, target);
    if (accept_camera(cam, fk, config.sampler.min_framing)) return spec;
  }
  throw SamplingError("no acceptable camera after " +
                      std::to_string(config.sampler.max_attempts) + " attempts (seed " +
                      std::to_string(seed) + ", poses '" + spec.pose_a + "'/'" + spec.pose_b +
                      "')");
}

SceneInstance resolve_scene(const SampleSpec& spec, const GenerationConfig& config,
                            const PoseLibrary& library) {
  SceneInstance scene;
  scene.skeleton = skeleton_for(spec, config);
  scene.pose = blended_pose(spec, library);
  scene.fk = forward_kinematics(scene.skeleton, scene.pose);
  scene.camera = make_camera(spec.camera, centroid(scene.fk));
  scene.tone = config.tones.resolve(config.tones.anchors.at(spec.tone_index).ita);
  return scene;
}

json to_json(const SampleSpec& s) {
  json j;
  j["pose_a"] = s.pose_a;
  j["pose_b"] = s.pose_b;
  j["blend_t"] = s.blend_t;
  j["tone_index"] = s.tone_index;
  j["gender"] = to_string(s.gender);
  j["handedness"] = to_string(s.handedness);
  j["camera"] = {{"radius", s.camera.radius},
                 {"azimuth", s.camera.azimuth},
                 {"elevation", s.camera.elevation},
                 {"jitter", s.camera.jitter},
                 {"vertical_fov", s.camera.vertical_fov},
                 {"exposure_ev", s.camera.exposure_ev},
                 {"resolution", s.camera.resolution}};
  j["environment_id"] = s.environment_id;
  j["env_rotation_z"] = s.env_rotation_z;
  j["seed"] = s.seed;
  return j;
}

SampleSpec spec_from_json(const json& j) {
  SampleSpec s;
  s.pose_a = require<std::string>(j, "pose_a");
  s.pose_b = require<std::string>(j, "pose_b");
  s.blend_t = require<double>(j, "blend_t");
  s.tone_index = require<int>(j, "tone_index");
  s.gender = gender_from_string(require<std::string>(j, "gender"));
  s.handedness = handedness_from_string(require<std::string>(j, "handedness"));
  const json& c = j.at("camera");
  s.camera.radius = require<double>(c, "radius");
  s.camera.azimuth = require<double>(c, "azimuth");
  s.camera.elevation = require<double>(c, "elevation");
  s.camera.jitter = require<Vec3>(c, "jitter");
  s.camera.vertical_fov = require<double>(c, "vertical_fov");
  s.camera.exposure_ev = require<double>(c, "exposure_ev");
  s.camera.resolution = require<int>(c, "resolution");
  s.environment_id = require<std::string>(j, "environment_id");
  s.env_rotation_z = require<double>(j, "env_rotation_z");
  s.seed = require<uint64_t>(j, "seed");
  return s;
}

}  // namespace handsynth
