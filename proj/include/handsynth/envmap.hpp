#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "handsynth/geometry.hpp"

namespace handsynth {

// Equirectangular radiance map, Z-up: row 0 is the zenith, u wraps in
// azimuth. Width is always twice the height and radiance is non-negative.
struct EnvMap {
  int width = 0;
  int height = 0;
  std::vector<float> pixels;  // RGB triples, row-major

  Vec3 mean_radiance;        // solid-angle-weighted average over the sphere
  Vec3 brightest_dir;        // direction of the peak-luminance texel
  Vec3 brightest_radiance;

  // Open by id: "proc:<name>" synthesizes a seeded sky, anything else is a
  // file path (.hdr or .pfm).
  static EnvMap open(const std::string& id);
  static EnvMap load(const std::string& path);
  static EnvMap procedural(uint64_t seed, int height = 128);

  Vec3 texel(int x, int y) const {
    const size_t i = (static_cast<size_t>(y) * width + x) * 3;
    return {pixels[i], pixels[i + 1], pixels[i + 2]};
  }

  // Bilinear lookup of a unit direction; wraps in azimuth, clamps at poles.
  Vec3 sample(const Vec3& dir) const;

  void finalize();  // validates shape, clamps negatives, computes stats
};

Vec3 direction_from_uv(double u, double v);
void uv_from_direction(const Vec3& dir, double& u, double& v);

// A rotated, exposure-scaled view of a map: lookup(dir) samples the map at
// dir rotated by -rotation_z about Z and multiplies by 2^exposure_ev.
struct ShadingEnvironment {
  const EnvMap* map = nullptr;
  double rotation_z = 0.0;
  double exposure_ev = 0.0;

  Vec3 lookup(const Vec3& dir) const;
  Vec3 ambient() const;         // exposure-scaled mean radiance
  Vec3 key_direction() const;   // world-space brightest direction
  Vec3 key_radiance() const;
};

}  // namespace handsynth
