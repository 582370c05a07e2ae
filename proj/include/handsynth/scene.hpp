#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "handsynth/camera.hpp"
#include "handsynth/config.hpp"
#include "handsynth/json_util.hpp"
#include "handsynth/pose_library.hpp"
#include "handsynth/skeleton.hpp"
#include "handsynth/skin_tone.hpp"

namespace handsynth {

// Sub-seed streams. Every random draw in the pipeline flows through
// derive_seed(sample_seed, stream, index).
inline constexpr uint64_t kStreamSample = 0;   // master -> per-sample seeds
inline constexpr uint64_t kStreamSpec = 1;     // pose/tone/env draws
inline constexpr uint64_t kStreamCamera = 2;   // camera attempts (index = attempt)
inline constexpr uint64_t kStreamAugment = 3;  // augmentation plans
inline constexpr uint64_t kStreamPerturb = 4;  // half-hand masking

// Everything needed to re-render one sample, serializable and replayable.
struct SampleSpec {
  std::string pose_a;
  std::string pose_b;
  double blend_t = 0.0;  // trajectory progress a->b, also the motion phase
  int tone_index = 0;
  Gender gender = Gender::Female;
  Handedness handedness = Handedness::Right;
  CameraConfig camera;
  std::string environment_id;
  double env_rotation_z = 0.0;
  uint64_t seed = 0;
};

json to_json(const SampleSpec& spec);
SampleSpec spec_from_json(const json& j);

// The spec resolved into render-ready state.
struct SceneInstance {
  HandSkeleton skeleton;
  Pose pose;
  FkResult fk;
  Camera camera;
  SkinTone tone;
};

// Fraction of the 21 keypoints whose pixel lands inside [0,res) x [0,res).
double framing_fraction(std::span<const Vec2> keypoints_2d, int resolution);

// True iff the hand centroid sits in front of the camera and at least
// min_framing of the keypoints project in-frame.
bool accept_camera(const Camera& camera, const FkResult& fk, double min_framing);

// Deterministic sampling of one spec from its seed. Gender and tone come
// from the balanced scheduler when `forced_cell` is non-negative
// (cell = gender * tones + tone); camera attempts retry with derived
// sub-seeds until acceptance. Throws SamplingError when the attempt cap is
// exhausted and std::invalid_argument when config lists no environments.
SampleSpec sample_spec(uint64_t seed, const GenerationConfig& config, const PoseLibrary& library,
                       int forced_cell = -1);

// Skeleton + blended pose + camera + tone for a spec. The blended pose is
// interpolate(eval(a, t), eval(b, t), t) with t = blend_t, so motion
// entries advance along their clips as the blend progresses.
SceneInstance resolve_scene(const SampleSpec& spec, const GenerationConfig& config,
                            const PoseLibrary& library);

}  // namespace handsynth
