// SPDX-License-Identifier: Apache-2.0
#include "gfad/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gfad::theory {

LassoConstants lasso_constants(double lambda, double mu, int active) {
  if (!(lambda >= 0.0)) throw InvalidParameter("lasso_constants: lambda must be >= 0");
  if (!(mu >= 0.0 && mu <= 1.0)) throw InvalidParameter("lasso_constants: mu outside [0, 1]");
  if (active < 0) throw InvalidParameter("lasso_constants: negative D");
  const double mu2 = mu * mu;
  const double d = active;
  const double denom = 1.0 + mu2 - mu2 * d;
  if (!(denom > 0.0))
    throw ConditionViolated("lasso_constants: 1 + mu^2 - mu^2 D = " + std::to_string(denom) +
                            " is not positive");
  return {lambda * (1.0 + mu2 - 2.0 * mu2 * d) / denom,
          lambda * (2.0 * (1.0 + mu2) - 3.0 * mu2 * d) / (denom * denom)};
}

double beta_function(double t, double c, double sigma_min2) {
  return std::exp(-2.0 * t * c / sigma_min2) * (1.0 + 2.0 * t);
}

Beta lemma2_beta(double c, double sigma_min2) {
  if (!(sigma_min2 > 0.0)) throw InvalidParameter("lemma2_beta: sigma_min^2 must be positive");
  if (!(c > 0.0 && c < sigma_min2))
    throw ConditionViolated("lemma2_beta: need 0 < C < sigma_min^2, got C = " + std::to_string(c) +
                            ", sigma_min^2 = " + std::to_string(sigma_min2));
  const double ratio = sigma_min2 / c;
  const double t0 = 0.5 * (ratio - 1.0);
  // beta(t0) = ratio * exp(1/ratio - 1)
  const double beta_t0 = ratio * std::exp(1.0 / ratio - 1.0);
  return {std::sqrt(beta_t0), t0};
}

namespace {

double delta_of(double t, double s1, double s2) {
  const double prod = s1 * s2;
  if (prod == 0.0) return t > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  return t * t / (2.0 * prod * (2.0 * prod + t));
}

}  // namespace

Deltas deltas(const BoundInputs& in, double c1_part, double c2_part) {
  if (in.active < 2 || in.pilot_length < 2)
    throw ConditionViolated("deltas: need D >= 2 and L >= 2 (got D = " + std::to_string(in.active) +
                            ", L = " + std::to_string(in.pilot_length) + ")");
  if (in.antennas < 1) throw InvalidParameter("deltas: M must be >= 1");
  if (!(in.s_infnorm > 0.0)) throw InvalidParameter("deltas: ||S||_inf must be positive");
  if (in.sigma_max_1 < 0.0 || in.sigma_max_2 < 0.0 || in.sigma_w_max_1 < 0.0 || in.sigma_w_max_2 < 0.0)
    throw InvalidParameter("deltas: negative standard deviation");
  if (!(c1_part > 0.0 && c2_part > 0.0)) throw InvalidParameter("deltas: C1 and C2 must be positive");

  const double m = in.antennas;
  const double d = in.active;
  const double l = in.pilot_length;
  const double t1 = c1_part * m / (in.s_infnorm * in.s_infnorm * d * (d - 1.0));
  const double t2 = c2_part * m / (l * (l - 1.0));
  return {delta_of(t1, in.sigma_max_1, in.sigma_max_2),
          delta_of(t2, in.sigma_w_max_1, in.sigma_w_max_2)};
}

double recovery_bound(int antennas, int active, int pilot_length, double gamma) {
  if (!(gamma > 1.0)) throw ConditionViolated("recovery_bound: gamma must exceed 1");
  if (antennas < 0 || active < 0 || pilot_length < 1)
    throw InvalidParameter("recovery_bound: bad dimensions");
  const double alpha = active + 4.0 * static_cast<double>(pilot_length) * pilot_length;
  const double tail = alpha * std::exp(-static_cast<double>(antennas) * std::log(gamma));
  return std::max(0.0, 1.0 - tail);
}

BoundReport evaluate_bound(const BoundInputs& in, double split, double gamma_factor) {
  BoundReport rep;
  if (!(split > 0.0 && split < 1.0)) throw InvalidParameter("evaluate_bound: split outside (0, 1)");
  if (in.mu > 0.0) {
    const double limit = 0.5 * (1.0 + 1.0 / (in.mu * in.mu));
    if (!(in.active < limit)) {
      rep.reason = "D violates the coherence condition D < (1 + 1/mu^2)/2";
      return rep;
    }
  }
  try {
    rep.constants = lasso_constants(in.lambda, in.mu, in.active);
    if (!(rep.constants.c1 > 0.0)) {
      rep.reason = "c1 is not positive";
      return rep;
    }
    const double total = rep.constants.c1 / in.pilot_length;
    rep.exponents = deltas(in, split * total, (1.0 - split) * total);
    rep.beta_min = lemma2_beta(rep.constants.c2, in.sigma_min2).beta;
  } catch (const ConditionViolated& e) {
    rep.reason = e.what();
    return rep;
  }
  const double cap = std::min({rep.beta_min, std::exp(rep.exponents.delta1), std::exp(rep.exponents.delta2)});
  rep.gamma = gamma_factor * cap;
  if (!(rep.gamma > 1.0)) {
    rep.reason = "no admissible gamma > 1";
    return rep;
  }
  rep.bound = recovery_bound(in.antennas, in.active, in.pilot_length, rep.gamma);
  rep.applicable = true;
  return rep;
}

Lemma2Check lemma2_empirical_check(double c, double sigma2, int antennas, int trials, Rng& rng) {
  if (antennas < 1 || trials < 1) throw InvalidParameter("lemma2_empirical_check: M and trials must be >= 1");
  const Beta b = lemma2_beta(c, sigma2);
  const double sd = std::sqrt(sigma2);
  long hits = 0;
  for (int t = 0; t < trials; ++t) {
    double acc = 0.0;
    for (int i = 0; i < antennas; ++i) {
      const double x = sd * rng.standard_normal();
      acc += x * x;
    }
    if (acc / antennas > c) ++hits;
  }
  return {static_cast<double>(hits) / trials, 1.0 - std::pow(b.beta, -static_cast<double>(antennas))};
}

}  // namespace gfad::theory
