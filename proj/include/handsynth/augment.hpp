#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "handsynth/config.hpp"
#include "handsynth/image.hpp"
#include "handsynth/renderer.hpp"

namespace handsynth {

enum class GeometricOp { None, DownscaleUpscale, Scale, Stretch, Translate };
enum class ColorOp {
  None,
  Brightness,
  ColorBalance,
  Contrast,
  Equalize,
  KernelFilter,
  NoiseInjection,
  PatchShuffle,
  Solarize,
  SolarizeAdd
};

const char* to_string(GeometricOp op);
const char* to_string(ColorOp op);
GeometricOp geometric_from_string(const std::string& s);
ColorOp color_from_string(const std::string& s);

// A fully-determined augmentation: at most one geometric op, at most one
// color op, optional blur/flips/erase. Applying the same plan to the same
// sample always yields the same output.
struct AugmentationPlan {
  GeometricOp geometric = GeometricOp::None;
  std::array<double, 3> gparams{};  // op-specific, see sample_plan

  ColorOp color = ColorOp::None;
  std::array<double, 3> cparams{};
  uint64_t color_seed = 0;  // noise / patch-shuffle randomness

  bool blur = false;
  double blur_sigma = 0.0;

  bool vflip = false;
  bool hflip = false;

  bool erase = false;
  std::array<double, 4> eparams{};  // cx, cy (bbox-relative), area fraction, aspect
  uint64_t erase_seed = 0;

  uint64_t seed = 0;
};

json to_json(const AugmentationPlan& p);
AugmentationPlan plan_from_json(const json& j);

// Independent branch draws per the configured distribution: geometric 30%
// (four variants at 7.5% each), color 30% (nine ops at 1/30 each), blur 50%,
// each flip 50%, erase 15%.
AugmentationPlan sample_plan(uint64_t seed, const AugmentParams& params);

// Applies a plan in the fixed order geometric -> color -> blur -> flips ->
// erase. Geometric ops and flips move pixels and keypoints through the same
// affine map (hflip also toggles handedness); everything else leaves the
// annotation untouched. The bbox is recomputed from the transformed
// keypoints and visibility drops for keypoints pushed out of frame.
void apply(Image& image, Annotation& annotation, const AugmentationPlan& plan);

// The affine pixel map (output <- input coordinates) realized by the plan's
// geometric + flip steps, exposed for label-consistency checks.
struct Affine2 {
  // x' = a*x + b*y + tx ; y' = c*x + d*y + ty
  double a = 1.0, b = 0.0, tx = 0.0;
  double c = 0.0, d = 1.0, ty = 0.0;

  Vec2 apply(const Vec2& p) const { return {a * p.x + b * p.y + tx, c * p.x + d * p.y + ty}; }
  Affine2 then(const Affine2& next) const;  // composition: next ∘ this
  Affine2 inverse() const;
};

Affine2 plan_affine(const AugmentationPlan& plan, int width, int height);

}  // namespace handsynth
