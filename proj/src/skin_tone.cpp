#include "handsynth/skin_tone.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "handsynth/errors.hpp"
#include "handsynth/geometry.hpp"

namespace handsynth {

double ita_degrees(double lab_l, double lab_b) {
  return rad_to_deg(std::atan2(lab_l - 50.0, lab_b));
}

ToneTable ToneTable::defaults() {
  // Six anchors spanning the dermatological scale, b* kept in a plausible
  // skin chroma range.
  ToneTable t;
  t.anchors = {{-80.0, 7.0}, {-30.0, 13.0}, {10.0, 17.0},
               {28.0, 19.0}, {41.0, 18.0},  {55.0, 15.0}};
  t.a_star = 12.0;
  return t;
}

SkinTone ToneTable::resolve(double ita_target) const {
  if (!(ita_target > -90.0 && ita_target < 90.0))
    throw std::invalid_argument("ITA target must lie in (-90, 90): " +
                                std::to_string(ita_target));
  if (anchors.empty()) throw std::invalid_argument("empty tone table");

  double b;
  if (ita_target <= anchors.front().ita) {
    b = anchors.front().b;
  } else if (ita_target >= anchors.back().ita) {
    b = anchors.back().b;
  } else {
    size_t hi = 1;
    while (anchors[hi].ita < ita_target) ++hi;
    const ToneAnchor& a0 = anchors[hi - 1];
    const ToneAnchor& a1 = anchors[hi];
    double u = (ita_target - a0.ita) / (a1.ita - a0.ita);
    b = a0.b + u * (a1.b - a0.b);
  }

  SkinTone tone;
  tone.lab_b = b;
  tone.lab_a = a_star;
  tone.lab_l = 50.0 + b * std::tan(deg_to_rad(ita_target));
  tone.ita_degrees = ita_degrees(tone.lab_l, tone.lab_b);
  if (tone.lab_l < 0.0 || tone.lab_l > 100.0)
    throw OutOfGamutError("ITA " + std::to_string(ita_target) +
                          " needs L* = " + std::to_string(tone.lab_l));
  tone.albedo = lab_to_linear_srgb(tone.lab_l, tone.lab_a, tone.lab_b);
  return tone;
}

std::array<double, 3> lab_to_linear_srgb(double l, double a, double b) {
  // Lab -> XYZ, D65 reference white.
  const double xn = 0.95047, yn = 1.0, zn = 1.08883;
  auto finv = [](double t) {
    const double d = 6.0 / 29.0;
    return t > d ? t * t * t : 3.0 * d * d * (t - 4.0 / 29.0);
  };
  double fy = (l + 16.0) / 116.0;
  double fx = fy + a / 500.0;
  double fz = fy - b / 200.0;
  double x = xn * finv(fx), y = yn * finv(fy), z = zn * finv(fz);

  // XYZ -> linear sRGB.
  std::array<double, 3> rgb{3.2404542 * x - 1.5371385 * y - 0.4985314 * z,
                            -0.9692660 * x + 1.8760108 * y + 0.0415560 * z,
                            0.0556434 * x - 0.2040259 * y + 1.0572252 * z};
  const double tol = 0.02;
  for (double& c : rgb) {
    if (c < -tol || c > 1.0 + tol)
      throw OutOfGamutError("Lab(" + std::to_string(l) + "," + std::to_string(a) + "," +
                            std::to_string(b) + ") outside sRGB gamut");
    c = std::clamp(c, 0.0, 1.0);
  }
  return rgb;
}

}  // namespace handsynth
