#include "handsynth/augment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "handsynth/rng.hpp"
#include "handsynth/scene.hpp"

namespace handsynth {

namespace {

const char* kGeometricNames[] = {"none", "downscale_upscale", "scale", "stretch", "translate"};
const char* kColorNames[] = {"none",          "brightness",    "color_balance",
                             "contrast",      "equalize",      "kernel_filter",
                             "noise_injection", "patch_shuffle", "solarize",
                             "solarize_add"};

uint8_t clamp8(double v) { return static_cast<uint8_t>(std::clamp(v, 0.0, 255.0) + 0.5); }

// Geometric resample: out(x, y) = in(inv(x, y)), bilinear, black outside.
void warp(Image& img, const Affine2& inv) {
  Image out(img.width, img.height);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const Vec2 src = inv.apply({static_cast<double>(x), static_cast<double>(y)});
      sample_bilinear(img, src.x, src.y, out.at(x, y));
    }
  }
  img = std::move(out);
}

void resample_to(const Image& src, Image& dst) {
  // Index-coordinate mapping that takes corner pixels to corner pixels.
  const double sx = dst.width > 1 ? double(src.width - 1) / (dst.width - 1) : 0.0;
  const double sy = dst.height > 1 ? double(src.height - 1) / (dst.height - 1) : 0.0;
  for (int y = 0; y < dst.height; ++y) {
    for (int x = 0; x < dst.width; ++x) {
      sample_bilinear(src, x * sx, y * sy, dst.at(x, y));
    }
  }
}

void downscale_upscale(Image& img, double factor) {
  const int w = std::max(2, static_cast<int>(std::lround(img.width * factor)));
  const int h = std::max(2, static_cast<int>(std::lround(img.height * factor)));
  Image small(w, h);
  resample_to(img, small);
  Image back(img.width, img.height);
  resample_to(small, back);
  img = std::move(back);
}

void apply_brightness(Image& img, double f) {
  for (uint8_t& v : img.pixels) v = clamp8(v * f);
}

void apply_color_balance(Image& img, const std::array<double, 3>& gains) {
  for (size_t i = 0; i < img.pixels.size(); i += 3) {
    for (int c = 0; c < 3; ++c) img.pixels[i + c] = clamp8(img.pixels[i + c] * gains[c]);
  }
}

void apply_contrast(Image& img, double f) {
  for (uint8_t& v : img.pixels) v = clamp8((v - 128.0) * f + 128.0);
}

void apply_equalize(Image& img) {
  // Per-channel histogram equalization over the full image.
  for (int c = 0; c < 3; ++c) {
    std::array<uint32_t, 256> hist{};
    for (size_t i = c; i < img.pixels.size(); i += 3) ++hist[img.pixels[i]];
    std::array<uint8_t, 256> lut{};
    const uint64_t total = img.pixels.size() / 3;
    uint64_t cum = 0;
    for (int v = 0; v < 256; ++v) {
      cum += hist[v];
      lut[v] = static_cast<uint8_t>((cum * 255 + total / 2) / std::max<uint64_t>(total, 1));
    }
    for (size_t i = c; i < img.pixels.size(); i += 3) img.pixels[i] = lut[img.pixels[i]];
  }
}

void apply_kernel_filter(Image& img, double amount) {
  // Unsharp cross kernel: center 1+4a, orthogonal neighbors -a.
  Image out(img.width, img.height);
  auto at = [&img](int x, int y, int c) {
    x = std::clamp(x, 0, img.width - 1);
    y = std::clamp(y, 0, img.height - 1);
    return static_cast<double>(img.at(x, y)[c]);
  };
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      for (int c = 0; c < 3; ++c) {
        const double v = at(x, y, c) * (1.0 + 4.0 * amount) -
                         amount * (at(x - 1, y, c) + at(x + 1, y, c) + at(x, y - 1, c) +
                                   at(x, y + 1, c));
        out.at(x, y)[c] = clamp8(v);
      }
    }
  }
  img = std::move(out);
}

void apply_noise(Image& img, double sigma, uint64_t seed) {
  Rng rng(seed);
  for (uint8_t& v : img.pixels) v = clamp8(v + rng.gaussian(0.0, sigma));
}

void apply_patch_shuffle(Image& img, int grid, uint64_t seed) {
  // Permute equal-size tiles; the ragged right/bottom remainder stays put.
  const int tw = img.width / grid, th = img.height / grid;
  if (tw == 0 || th == 0) return;
  std::vector<int> perm(static_cast<size_t>(grid) * grid);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(seed);
  for (size_t i = perm.size() - 1; i > 0; --i) {
    std::swap(perm[i], perm[rng.uniform_index(i + 1)]);
  }
  const Image src = img;
  for (int t = 0; t < grid * grid; ++t) {
    const int dst_x = (t % grid) * tw, dst_y = (t / grid) * th;
    const int src_x = (perm[t] % grid) * tw, src_y = (perm[t] / grid) * th;
    for (int y = 0; y < th; ++y) {
      const uint8_t* s = src.at(src_x, src_y + y);
      uint8_t* d = img.at(dst_x, dst_y + y);
      std::copy(s, s + 3 * tw, d);
    }
  }
}

void apply_solarize(Image& img, int threshold) {
  for (uint8_t& v : img.pixels) {
    if (v >= threshold) v = static_cast<uint8_t>(255 - v);
  }
}

void apply_solarize_add(Image& img, int add, int threshold) {
  for (uint8_t& v : img.pixels) {
    if (v < threshold) v = clamp8(v + add);
  }
}

void apply_blur(Image& img, double sigma) {
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<double> kernel(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    kernel[i + radius] = std::exp(-0.5 * (i / sigma) * (i / sigma));
    sum += kernel[i + radius];
  }
  for (double& k : kernel) k /= sum;

  Image tmp(img.width, img.height);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      double acc[3] = {0, 0, 0};
      for (int i = -radius; i <= radius; ++i) {
        const int xi = std::clamp(x + i, 0, img.width - 1);
        const uint8_t* p = img.at(xi, y);
        for (int c = 0; c < 3; ++c) acc[c] += kernel[i + radius] * p[c];
      }
      for (int c = 0; c < 3; ++c) tmp.at(x, y)[c] = clamp8(acc[c]);
    }
  }
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      double acc[3] = {0, 0, 0};
      for (int i = -radius; i <= radius; ++i) {
        const int yi = std::clamp(y + i, 0, img.height - 1);
        const uint8_t* p = tmp.at(x, yi);
        for (int c = 0; c < 3; ++c) acc[c] += kernel[i + radius] * p[c];
      }
      for (int c = 0; c < 3; ++c) img.at(x, y)[c] = clamp8(acc[c]);
    }
  }
}

void flip_vertical(Image& img) {
  for (int y = 0; y < img.height / 2; ++y) {
    uint8_t* a = img.at(0, y);
    uint8_t* b = img.at(0, img.height - 1 - y);
    std::swap_ranges(a, a + 3 * img.width, b);
  }
}

void flip_horizontal(Image& img) {
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width / 2; ++x) {
      uint8_t* a = img.at(x, y);
      uint8_t* b = img.at(img.width - 1 - x, y);
      for (int c = 0; c < 3; ++c) std::swap(a[c], b[c]);
    }
  }
}

void apply_erase(Image& img, const Annotation& ann, const AugmentationPlan& plan) {
  const Bbox& bb = ann.bbox;
  if (bb.w <= 0.0 && bb.h <= 0.0) return;
  const double area = std::max(1.0, bb.w * bb.h) * plan.eparams[2];
  const double aspect = plan.eparams[3];
  const double w = std::sqrt(area * aspect), h = std::sqrt(area / aspect);
  const double cx = bb.x + plan.eparams[0] * bb.w;
  const double cy = bb.y + plan.eparams[1] * bb.h;
  const int x0 = std::clamp(static_cast<int>(std::lround(cx - w / 2)), 0, img.width - 1);
  const int x1 = std::clamp(static_cast<int>(std::lround(cx + w / 2)), 0, img.width - 1);
  const int y0 = std::clamp(static_cast<int>(std::lround(cy - h / 2)), 0, img.height - 1);
  const int y1 = std::clamp(static_cast<int>(std::lround(cy + h / 2)), 0, img.height - 1);
  Rng rng(plan.erase_seed);
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      uint8_t* p = img.at(x, y);
      for (int c = 0; c < 3; ++c) p[c] = clamp8(128.0 + rng.gaussian(0.0, 40.0));
    }
  }
}

void recompute_bbox(Annotation& ann, int width, int height) {
  double min_x = std::numeric_limits<double>::infinity(), min_y = min_x;
  double max_x = -min_x, max_y = -min_y;
  for (const Vec2& p : ann.keypoints_2d) {
    const double cx = std::clamp(p.x, 0.0, static_cast<double>(width - 1));
    const double cy = std::clamp(p.y, 0.0, static_cast<double>(height - 1));
    min_x = std::min(min_x, cx);
    max_x = std::max(max_x, cx);
    min_y = std::min(min_y, cy);
    max_y = std::max(max_y, cy);
  }
  ann.bbox = {min_x, min_y, max_x - min_x, max_y - min_y};
}

}  // namespace

const char* to_string(GeometricOp op) { return kGeometricNames[static_cast<int>(op)]; }
const char* to_string(ColorOp op) { return kColorNames[static_cast<int>(op)]; }

GeometricOp geometric_from_string(const std::string& s) {
  for (int i = 0; i < 5; ++i) {
    if (s == kGeometricNames[i]) return static_cast<GeometricOp>(i);
  }
  throw SchemaError("unknown geometric op: " + s);
}

ColorOp color_from_string(const std::string& s) {
  for (int i = 0; i < 10; ++i) {
    if (s == kColorNames[i]) return static_cast<ColorOp>(i);
  }
  throw SchemaError("unknown color op: " + s);
}

Affine2 Affine2::then(const Affine2& n) const {
  return {n.a * a + n.b * c,  n.a * b + n.b * d,  n.a * tx + n.b * ty + n.tx,
          n.c * a + n.d * c,  n.c * b + n.d * d,  n.c * tx + n.d * ty + n.ty};
}

Affine2 Affine2::inverse() const {
  const double det = a * d - b * c;
  const double ia = d / det, ib = -b / det, ic = -c / det, id = a / det;
  return {ia, ib, -(ia * tx + ib * ty), ic, id, -(ic * tx + id * ty)};
}

Affine2 plan_affine(const AugmentationPlan& plan, int width, int height) {
  const double cx = (width - 1) * 0.5, cy = (height - 1) * 0.5;
  Affine2 m;
  switch (plan.geometric) {
    case GeometricOp::Scale: {
      const double s = plan.gparams[0];
      m = {s, 0.0, cx * (1.0 - s), 0.0, s, cy * (1.0 - s)};
      break;
    }
    case GeometricOp::Stretch: {
      const double sx = plan.gparams[0], sy = plan.gparams[1];
      m = {sx, 0.0, cx * (1.0 - sx), 0.0, sy, cy * (1.0 - sy)};
      break;
    }
    case GeometricOp::Translate:
      m.tx = plan.gparams[0] * width;
      m.ty = plan.gparams[1] * height;
      break;
    case GeometricOp::DownscaleUpscale:  // resolution loss only; identity map
    case GeometricOp::None:
      break;
  }
  if (plan.hflip) m = m.then({-1.0, 0.0, static_cast<double>(width - 1), 0.0, 1.0, 0.0});
  if (plan.vflip) m = m.then({1.0, 0.0, 0.0, 0.0, -1.0, static_cast<double>(height - 1)});
  return m;
}

AugmentationPlan sample_plan(uint64_t seed, const AugmentParams& ap) {
  Rng rng(derive_seed(seed, kStreamAugment));
  AugmentationPlan plan;
  plan.seed = seed;

  if (rng.uniform() < ap.p_geometric) {
    plan.geometric = static_cast<GeometricOp>(1 + rng.uniform_index(4));
    switch (plan.geometric) {
      case GeometricOp::DownscaleUpscale:
        plan.gparams[0] = rng.uniform(ap.downscale_min, ap.downscale_max);
        break;
      case GeometricOp::Scale:
        plan.gparams[0] = rng.uniform(ap.scale_min, ap.scale_max);
        break;
      case GeometricOp::Stretch:
        if (rng.bernoulli(0.5)) {
          plan.gparams[0] = rng.uniform(ap.stretch_min, ap.stretch_max);
          plan.gparams[1] = 1.0;
        } else {
          plan.gparams[0] = 1.0;
          plan.gparams[1] = rng.uniform(ap.stretch_min, ap.stretch_max);
        }
        break;
      case GeometricOp::Translate:
        plan.gparams[0] = rng.uniform(-ap.translate_frac, ap.translate_frac);
        plan.gparams[1] = rng.uniform(-ap.translate_frac, ap.translate_frac);
        break;
      default:
        break;
    }
  }

  if (rng.uniform() < ap.p_color) {
    plan.color = static_cast<ColorOp>(1 + rng.uniform_index(9));
    plan.color_seed = derive_seed(seed, kStreamAugment, 101);
    switch (plan.color) {
      case ColorOp::Brightness:
        plan.cparams[0] = rng.uniform(0.6, 1.4);
        break;
      case ColorOp::ColorBalance:
        for (int c = 0; c < 3; ++c) plan.cparams[c] = rng.uniform(0.8, 1.2);
        break;
      case ColorOp::Contrast:
        plan.cparams[0] = rng.uniform(0.6, 1.5);
        break;
      case ColorOp::Equalize:
        break;
      case ColorOp::KernelFilter:
        plan.cparams[0] = rng.uniform(0.2, 0.8);
        break;
      case ColorOp::NoiseInjection:
        plan.cparams[0] = rng.uniform(4.0, 16.0);
        break;
      case ColorOp::PatchShuffle:
        plan.cparams[0] = rng.uniform_int(2, 4);
        break;
      case ColorOp::Solarize:
        plan.cparams[0] = rng.uniform_int(96, 192);
        break;
      case ColorOp::SolarizeAdd:
        plan.cparams[0] = rng.uniform_int(32, 96);
        plan.cparams[1] = 128;
        break;
      default:
        break;
    }
  }

  if (rng.uniform() < ap.p_blur) {
    plan.blur = true;
    plan.blur_sigma = rng.uniform(ap.blur_sigma_min, ap.blur_sigma_max);
  }
  plan.vflip = rng.uniform() < ap.p_vflip;
  plan.hflip = rng.uniform() < ap.p_hflip;
  if (rng.uniform() < ap.p_erase) {
    plan.erase = true;
    plan.eparams[0] = rng.uniform();
    plan.eparams[1] = rng.uniform();
    plan.eparams[2] = rng.uniform(ap.erase_min_frac, ap.erase_max_frac);
    plan.eparams[3] = rng.uniform(0.5, 2.0);
    plan.erase_seed = derive_seed(seed, kStreamAugment, 202);
  }
  return plan;
}

void apply(Image& image, Annotation& annotation, const AugmentationPlan& plan) {
  // Pixel warp for the geometric step (inverse-mapped), done first.
  if (plan.geometric == GeometricOp::DownscaleUpscale) {
    downscale_upscale(image, plan.gparams[0]);
  } else if (plan.geometric != GeometricOp::None) {
    AugmentationPlan geo_only = plan;
    geo_only.hflip = geo_only.vflip = false;
    warp(image, plan_affine(geo_only, image.width, image.height).inverse());
  }

  switch (plan.color) {
    case ColorOp::Brightness:
      apply_brightness(image, plan.cparams[0]);
      break;
    case ColorOp::ColorBalance:
      apply_color_balance(image, {plan.cparams[0], plan.cparams[1], plan.cparams[2]});
      break;
    case ColorOp::Contrast:
      apply_contrast(image, plan.cparams[0]);
      break;
    case ColorOp::Equalize:
      apply_equalize(image);
      break;
    case ColorOp::KernelFilter:
      apply_kernel_filter(image, plan.cparams[0]);
      break;
    case ColorOp::NoiseInjection:
      apply_noise(image, plan.cparams[0], plan.color_seed);
      break;
    case ColorOp::PatchShuffle:
      apply_patch_shuffle(image, static_cast<int>(plan.cparams[0]), plan.color_seed);
      break;
    case ColorOp::Solarize:
      apply_solarize(image, static_cast<int>(plan.cparams[0]));
      break;
    case ColorOp::SolarizeAdd:
      apply_solarize_add(image, static_cast<int>(plan.cparams[0]),
                         static_cast<int>(plan.cparams[1]));
      break;
    case ColorOp::None:
      break;
  }

  if (plan.blur) apply_blur(image, plan.blur_sigma);
  if (plan.vflip) flip_vertical(image);
  if (plan.hflip) flip_horizontal(image);

  // Labels follow the combined geometric + flip map.
  const Affine2 m = plan_affine(plan, image.width, image.height);
  for (int i = 0; i < kNumJoints; ++i) {
    annotation.keypoints_2d[i] = m.apply(annotation.keypoints_2d[i]);
    const Vec2& p = annotation.keypoints_2d[i];
    const bool in_frame =
        p.x >= 0.0 && p.x < image.width && p.y >= 0.0 && p.y < image.height;
    annotation.visible[i] = annotation.visible[i] && in_frame;
  }
  if (plan.hflip) {
    annotation.meta.handedness = annotation.meta.handedness == Handedness::Right
                                     ? Handedness::Left
                                     : Handedness::Right;
  }
  recompute_bbox(annotation, image.width, image.height);

  if (plan.erase) apply_erase(image, annotation, plan);
}

json to_json(const AugmentationPlan& p) {
  json j;
  j["geometric"] = to_string(p.geometric);
  j["gparams"] = p.gparams;
  j["color"] = to_string(p.color);
  j["cparams"] = p.cparams;
  j["color_seed"] = p.color_seed;
  j["blur"] = p.blur;
  j["blur_sigma"] = p.blur_sigma;
  j["vflip"] = p.vflip;
  j["hflip"] = p.hflip;
  j["erase"] = p.erase;
  j["eparams"] = p.eparams;
  j["erase_seed"] = p.erase_seed;
  j["seed"] = p.seed;
  return j;
}

AugmentationPlan plan_from_json(const json& j) {
  AugmentationPlan p;
  p.geometric = geometric_from_string(require<std::string>(j, "geometric"));
  p.gparams = require<std::array<double, 3>>(j, "gparams");
  p.color = color_from_string(require<std::string>(j, "color"));
  p.cparams = require<std::array<double, 3>>(j, "cparams");
  p.color_seed = require<uint64_t>(j, "color_seed");
  p.blur = require<bool>(j, "blur");
  p.blur_sigma = require<double>(j, "blur_sigma");
  p.vflip = require<bool>(j, "vflip");
  p.hflip = require<bool>(j, "hflip");
  p.erase = require<bool>(j, "erase");
  p.eparams = require<std::array<double, 4>>(j, "eparams");
  p.erase_seed = require<uint64_t>(j, "erase_seed");
  p.seed = require<uint64_t>(j, "seed");
  return p;
}

}  // namespace handsynth
