#include "handsynth/envmap.hpp"

#include <algorithm>
#include <cmath>

#include "handsynth/errors.hpp"
#include "handsynth/image.hpp"
#include "handsynth/rng.hpp"

namespace handsynth {

namespace {
double luminance(const Vec3& c) { return 0.2126 * c.x + 0.7152 * c.y + 0.0722 * c.z; }

Vec3 rotate_z(const Vec3& v, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * v.x - s * v.y, s * v.x + c * v.y, v.z};
}
}  // namespace

Vec3 direction_from_uv(double u, double v) {
  const double phi = (u - 0.5) * 2.0 * kPi;
  const double theta = (0.5 - v) * kPi;  // elevation; v=0 is the zenith
  const double c = std::cos(theta);
  return {c * std::cos(phi), c * std::sin(phi), std::sin(theta)};
}

void uv_from_direction(const Vec3& dir, double& u, double& v) {
  const double phi = std::atan2(dir.y, dir.x);
  const double theta = std::asin(std::clamp(dir.z, -1.0, 1.0));
  u = phi / (2.0 * kPi) + 0.5;
  v = 0.5 - theta / kPi;
}

Vec3 EnvMap::sample(const Vec3& dir) const {
  double u, v;
  uv_from_direction(normalized(dir), u, v);
  double x = u * width - 0.5;
  double y = v * height - 0.5;
  const double fx = std::floor(x), fy = std::floor(y);
  const double tx = x - fx, ty = y - fy;
  const int x0 = static_cast<int>(fx), y0 = static_cast<int>(fy);
  auto wrap_x = [this](int xi) { return ((xi % width) + width) % width; };
  auto clamp_y = [this](int yi) { return std::clamp(yi, 0, height - 1); };
  const Vec3 c00 = texel(wrap_x(x0), clamp_y(y0));
  const Vec3 c10 = texel(wrap_x(x0 + 1), clamp_y(y0));
  const Vec3 c01 = texel(wrap_x(x0), clamp_y(y0 + 1));
  const Vec3 c11 = texel(wrap_x(x0 + 1), clamp_y(y0 + 1));
  const Vec3 top = c00 * (1.0 - tx) + c10 * tx;
  const Vec3 bot = c01 * (1.0 - tx) + c11 * tx;
  return top * (1.0 - ty) + bot * ty;
}

void EnvMap::finalize() {
  if (width != 2 * height || height <= 0) {
    throw SchemaError("environment map must be equirectangular (width = 2 x height), got " +
                      std::to_string(width) + "x" + std::to_string(height));
  }
  if (pixels.size() != static_cast<size_t>(width) * height * 3) {
    throw SchemaError("environment map pixel buffer has the wrong size");
  }
  for (float& p : pixels) p = std::max(p, 0.0f);

  Vec3 sum{};
  double weight_sum = 0.0;
  double best = -1.0;
  for (int y = 0; y < height; ++y) {
    // Texel solid angle on the equirectangular grid varies as cos(elevation).
    const double v = (y + 0.5) / height;
    const double w = std::cos((0.5 - v) * kPi);
    for (int x = 0; x < width; ++x) {
      const Vec3 c = texel(x, y);
      sum = sum + c * w;
      weight_sum += w;
      const double lum = luminance(c);
      if (lum > best) {
        best = lum;
        brightest_radiance = c;
        brightest_dir = direction_from_uv((x + 0.5) / width, v);
      }
    }
  }
  mean_radiance = weight_sum > 0.0 ? sum * (1.0 / weight_sum) : Vec3{};
}

EnvMap EnvMap::procedural(uint64_t seed, int height) {
  Rng rng(seed);
  EnvMap env;
  env.height = height;
  env.width = 2 * height;
  env.pixels.resize(static_cast<size_t>(env.width) * env.height * 3);

  // A three-stop vertical gradient (ground / horizon / zenith)...
  const Vec3 zenith{0.25 + 0.6 * rng.uniform(), 0.35 + 0.55 * rng.uniform(),
                    0.55 + 0.65 * rng.uniform()};
  const Vec3 horizon{0.45 + 0.5 * rng.uniform(), 0.4 + 0.45 * rng.uniform(),
                     0.35 + 0.4 * rng.uniform()};
  const Vec3 ground = horizon * (0.15 + 0.25 * rng.uniform());

  // ...plus a few gaussian light blobs, elevation-biased upward.
  struct Blob {
    Vec3 dir;
    Vec3 radiance;
    double inv_sigma;
  };
  std::vector<Blob> blobs;
  const int n_blobs = 1 + static_cast<int>(rng.uniform_index(3));
  for (int i = 0; i < n_blobs; ++i) {
    const double phi = rng.uniform(0.0, 2.0 * kPi);
    const double z = rng.uniform(0.15, 0.95);
    const double r = std::sqrt(1.0 - z * z);
    const double intensity = rng.uniform(6.0, 28.0);
    const Vec3 tint{1.0, rng.uniform(0.85, 1.0), rng.uniform(0.7, 0.95)};
    blobs.push_back({{r * std::cos(phi), r * std::sin(phi), z},
                     tint * intensity,
                     1.0 / rng.uniform(0.06, 0.22)});
  }

  size_t i = 0;
  for (int y = 0; y < env.height; ++y) {
    const double v = (y + 0.5) / env.height;
    for (int x = 0; x < env.width; ++x) {
      const Vec3 dir = direction_from_uv((x + 0.5) / env.width, v);
      Vec3 c;
      if (dir.z >= 0.0) {
        const double t = std::pow(dir.z, 0.65);
        c = horizon * (1.0 - t) + zenith * t;
      } else {
        const double t = std::min(1.0, -dir.z * 3.0);
        c = horizon * (1.0 - t) + ground * t;
      }
      for (const Blob& b : blobs) {
        const double ang = std::acos(std::clamp(dot(dir, b.dir), -1.0, 1.0));
        const double g = ang * b.inv_sigma;
        c = c + b.radiance * std::exp(-g * g);
      }
      env.pixels[i++] = static_cast<float>(c.x);
      env.pixels[i++] = static_cast<float>(c.y);
      env.pixels[i++] = static_cast<float>(c.z);
    }
  }
  env.finalize();
  return env;
}

EnvMap EnvMap::load(const std::string& path) {
  FloatImage img;
  if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".pfm") == 0) {
    img = read_pfm(path);
  } else if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".hdr") == 0) {
    img = read_radiance_hdr(path);
  } else {
    throw SchemaError("unsupported environment format (want .hdr or .pfm): " + path);
  }
  EnvMap env;
  env.width = img.width;
  env.height = img.height;
  env.pixels = std::move(img.pixels);
  env.finalize();
  return env;
}

EnvMap EnvMap::open(const std::string& id) {
  if (id.rfind("proc:", 0) == 0) return procedural(hash_string(id.c_str()));
  return load(id);
}

Vec3 ShadingEnvironment::lookup(const Vec3& dir) const {
  return map->sample(rotate_z(dir, -rotation_z)) * std::exp2(exposure_ev);
}

Vec3 ShadingEnvironment::ambient() const { return map->mean_radiance * std::exp2(exposure_ev); }

Vec3 ShadingEnvironment::key_direction() const { return rotate_z(map->brightest_dir, rotation_z); }

Vec3 ShadingEnvironment::key_radiance() const {
  return map->brightest_radiance * std::exp2(exposure_ev);
}

}  // namespace handsynth
