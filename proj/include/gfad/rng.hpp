// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>

#include "gfad/common.hpp"

namespace gfad {

/// Seeded generator with per-stream derivation. A Monte Carlo trial takes the
/// stream `Rng::stream(seed, trial)` so trials are independent of execution order.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix(seed)) {}

  static Rng stream(std::uint64_t master_seed, std::uint64_t index);

  /// Derive an independent child generator; `tag` separates sibling streams.
  Rng split(std::uint64_t tag);

  double uniform(double lo, double hi);
  double standard_normal();
  /// Circularly-symmetric complex Gaussian, E|z|^2 = variance.
  cplx complex_normal(double variance = 1.0);
  bool bernoulli(double p);
  int uniform_int(int lo, int hi_inclusive);

  CMatrix complex_normal_matrix(Index rows, Index cols, double variance = 1.0);

  std::mt19937_64& engine() { return engine_; }

 private:
  static std::uint64_t mix(std::uint64_t x);

  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace gfad
