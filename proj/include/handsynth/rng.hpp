#pragma once

#include <cstdint>
#include <random>

#include "handsynth/geometry.hpp"

namespace handsynth {

// splitmix64 finalizer; used to derive independent sub-seeds from
// (master seed, stream, index) tuples so worker count never affects output.
inline uint64_t mix64(uint64_t v) {
  v += 0x9e3779b97f4a7c15ULL;
  v = (v ^ (v >> 30)) * 0xbf58476d1ce4e5b9ULL;
  v = (v ^ (v >> 27)) * 0x94d049bb133111ebULL;
  return v ^ (v >> 31);
}

inline uint64_t derive_seed(uint64_t master, uint64_t stream, uint64_t index = 0) {
  return mix64(mix64(master ^ 0x243f6a8885a308d3ULL) + mix64(stream) * 0x100000001b3ULL +
               index);
}

inline uint64_t hash_string(const char* s) {
  // FNV-1a.
  uint64_t h = 0xcbf29ce484222325ULL;
  for (; *s; ++s) h = (h ^ static_cast<unsigned char>(*s)) * 0x100000001b3ULL;
  return h;
}

// mt19937_64 engine with hand-rolled value mappings. The engine's output is
// pinned by the standard; the std:: distributions are not, so the mappings
// below are spelled out to keep generated bytes identical across toolchains.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n). Lemire reduction, slight bias is < 2^-64.
  uint64_t uniform_index(uint64_t n) {
    return static_cast<uint64_t>(
        (static_cast<__uint128_t>(engine_()) * static_cast<__uint128_t>(n)) >> 64);
  }

  int uniform_int(int lo, int hi_inclusive) {
    return lo + static_cast<int>(uniform_index(static_cast<uint64_t>(hi_inclusive - lo + 1)));
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Box-Muller; deterministic, unlike std::normal_distribution.
  double gaussian(double mean = 0.0, double sigma = 1.0) {
    double u1 = uniform();
    double u2 = uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    double r = std::sqrt(-2.0 * std::log(u1));
    return mean + sigma * r * std::cos(2.0 * kPi * u2);
  }

  // Uniform over SO(3) (Shoemake).
  Quat uniform_rotation() {
    double u1 = uniform(), u2 = uniform(), u3 = uniform();
    double a = std::sqrt(1.0 - u1), b = std::sqrt(u1);
    return Quat{a * std::sin(2.0 * kPi * u2), a * std::cos(2.0 * kPi * u2),
                b * std::sin(2.0 * kPi * u3), b * std::cos(2.0 * kPi * u3)}
        .normalized();
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace handsynth
