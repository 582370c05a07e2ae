#pragma once

#include <array>
#include <vector>

namespace handsynth {

// Individual Typology Angle in degrees: arctan((L* - 50) / b*).
double ita_degrees(double lab_l, double lab_b);

struct SkinTone {
  double ita_degrees = 0.0;
  double lab_l = 0.0;
  double lab_a = 0.0;
  double lab_b = 0.0;
  std::array<double, 3> albedo{0.0, 0.0, 0.0};  // linear sRGB, [0,1]
};

// One anchor per configured tone: the ITA it realizes and the b* chromaticity
// used there. L* follows from the ITA relation.
struct ToneAnchor {
  double ita = 0.0;
  double b = 0.0;
};

struct ToneTable {
  std::vector<ToneAnchor> anchors;  // sorted by ascending ita
  double a_star = 12.0;

  static ToneTable defaults();

  // Resolves a target ITA to a full tone. b* interpolates between anchors,
  // L* = 50 + b*·tan(ita) so the round-trip is exact. Throws
  // std::invalid_argument outside (-90, 90) and OutOfGamutError when the
  // resulting Lab color cannot be represented in linear sRGB.
  SkinTone resolve(double ita_target) const;
};

// CIE Lab (D65) to linear sRGB. Throws OutOfGamutError if any channel falls
// outside [0,1] by more than a small tolerance; minor excursions are clamped.
std::array<double, 3> lab_to_linear_srgb(double l, double a, double b);

}  // namespace handsynth
