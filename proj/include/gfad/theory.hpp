// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "gfad/common.hpp"
#include "gfad/rng.hpp"

namespace gfad::theory {

/// Quantities entering the recovery-probability bound of the covariance LASSO.
struct BoundInputs {
  double lambda = 0.0;
  double mu = 0.0;  ///< pilot coherence mu_S
  int active = 0;   ///< D
  int pilot_length = 0;
  int antennas = 0;
  double sigma_max_1 = 1.0;  ///< largest active channel standard deviation
  double sigma_max_2 = 1.0;  ///< second largest
  double sigma_w_max_1 = 0.0;
  double sigma_w_max_2 = 0.0;
  double s_infnorm = 0.0;  ///< max |S_{l,k}|
  double sigma_min2 = 1.0;  ///< smallest active channel variance
};

struct LassoConstants {
  double c1 = 0.0;  ///< bound on ||e||_2 (event E1)
  double c2 = 0.0;  ///< bound on the smallest sample variance (event E2)
};

/// c1 = lambda (1 + mu^2 - 2 mu^2 D) / (1 + mu^2 - mu^2 D),
/// c2 = lambda (2 (1 + mu^2) - 3 mu^2 D) / (1 + mu^2 - mu^2 D)^2.
LassoConstants lasso_constants(double lambda, double mu, int active);

struct Beta {
  double beta = 1.0;  ///< sqrt(beta(t0))
  double t0 = 0.0;
};

/// beta(t) = exp(-2 t C / sigma^2) (1 + 2 t), maximized at t0 = (sigma^2 / C - 1) / 2.
/// Requires 0 < C < sigma_min2.
Beta lemma2_beta(double c, double sigma_min2);

/// Chernoff function beta(t) itself.
double beta_function(double t, double c, double sigma_min2);

struct Deltas {
  double delta1 = 0.0;
  double delta2 = 0.0;
};

/// delta1 = t1^2 / (2 s1 s2 (2 s1 s2 + t1)), t1 = C1 M / (||S||_inf^2 D (D - 1)),
/// delta2 = t2^2 / (2 w1 w2 (2 w1 w2 + t2)), t2 = C2 M / (L (L - 1)).
/// A zero standard-deviation product gives an infinite exponent.
Deltas deltas(const BoundInputs& in, double c1_part, double c2_part);

/// max(0, 1 - (D + 4 L^2) gamma^{-M}).
double recovery_bound(int antennas, int active, int pilot_length, double gamma);

struct BoundReport {
  bool applicable = false;
  std::string reason;  ///< why the bound is vacuous when !applicable
  LassoConstants constants;
  Deltas exponents;
  double beta_min = 1.0;
  double gamma = 1.0;
  double bound = 0.0;
};

/// Full chain: constants, split C1 = split * c1 / L and C2 = (1 - split) * c1 / L,
/// beta_min = lemma2_beta(c2).beta, gamma = gamma_factor * min(beta_min, e^delta1, e^delta2).
/// Never throws on violated hypotheses; reports them in `reason`.
BoundReport evaluate_bound(const BoundInputs& in, double split = 0.5, double gamma_factor = 0.99);

struct Lemma2Check {
  double empirical_prob = 0.0;
  double bound = 0.0;
};

/// Monte Carlo estimate of P((1/M) sum x_i^2 > C), x_i ~ N(0, sigma2) real, next
/// to the guarantee 1 - beta^{-M}.
Lemma2Check lemma2_empirical_check(double c, double sigma2, int antennas, int trials, Rng& rng);

}  // namespace gfad::theory
