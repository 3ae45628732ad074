#pragma once

#include "sxr/types.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace sxr {

// Deterministic RNG. std::uniform_real_distribution is implementation
// defined, so samples are generated directly from the raw 64-bit stream;
// identical seeds give identical samples on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

  double uniform() {  // [0, 1)
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  Vec point_in(const Box& box) {
    Vec x(box.dim());
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = uniform(box.lo[i], box.hi[i]);
    return x;
  }

  // Interior point of the unit simplex (weights sum to 1, each >= floor).
  Vec simplex_weights(Eigen::Index n, double floor_weight = 1e-3) {
    Vec w(n);
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      w[i] = floor_weight - std::log(1.0 - uniform()) * 0.25;  // shifted exponential
      total += w[i];
    }
    return w / total;
  }

  double normal() {  // Box-Muller, deterministic
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  Vec direction(Eigen::Index n) {
    Vec d(n);
    do {
      for (Eigen::Index i = 0; i < n; ++i) d[i] = normal();
    } while (d.norm() < 1e-12);
    return d / d.norm();
  }

  /// Independent substream for task `index`; keeps parallel sampling loops
  /// deterministic under a single top-level seed.
  Rng fork(std::uint64_t index) const {
    std::uint64_t z = seed_ + 0x9e3779b97f4a7c15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return Rng(z ^ (z >> 31));
  }

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
};

}  // namespace sxr
