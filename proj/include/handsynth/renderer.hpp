#pragma once

#include <array>

#include "handsynth/envmap.hpp"
#include "handsynth/image.hpp"
#include "handsynth/mesh.hpp"
#include "handsynth/scene.hpp"

namespace handsynth {

struct Bbox {
  double x = 0.0, y = 0.0, w = 0.0, h = 0.0;
};

// Ground-truth labels for one rendered sample. Keypoint pixel coordinates
// use the index convention (pixel i's center is coordinate i, in-frame means
// 0 <= x < resolution) and may fall outside the image.
struct Annotation {
  std::array<Vec2, kNumJoints> keypoints_2d;
  std::array<bool, kNumJoints> visible{};
  std::array<Vec3, kNumJoints> keypoints_3d;  // camera space, meters
  Bbox bbox;                                  // extrema of in-image-clamped keypoints
  SampleSpec meta;
};

json to_json(const Annotation& a);
Annotation annotation_from_json(const json& j);

struct RenderResult {
  Image image;
  Annotation annotation;
  FloatImage zbuffer;  // camera-space depth, +inf where background
};

// Z-buffered rasterization of the skinned mesh over the environment
// background. Shading is albedo x (ambient environment mean + wrap-diffuse
// key light from the brightest environment direction); pixels are
// gamma-encoded on output. Deterministic for a fixed spec.
RenderResult render(const SampleSpec& spec, const SceneInstance& scene, const SkinnedMesh& mesh,
                    const EnvMap& env, const RenderParams& params);

// Convenience wrapper: resolves the scene, builds the mesh, opens the
// environment, renders.
RenderResult render_sample(const SampleSpec& spec, const GenerationConfig& config,
                           const PoseLibrary& library);

// Visibility rule used by the renderer, exposed for tests: a keypoint is
// visible iff it projects in-frame and its camera-space depth is within
// epsilon of the z-buffer at its pixel (markers sit inside the mesh, so
// epsilon covers the shell thickness).
bool keypoint_visible(const Vec2& px, double depth, const FloatImage& zbuffer, double epsilon);

}  // namespace handsynth
