// SPDX-License-Identifier: Apache-2.0
#include "gfad/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "gfad/detect.hpp"

namespace gfad {

MmvProblem MmvProblem::from_received(const CMatrix& received_pilot, PilotDictionary pilots,
                                     double noise_variance) {
  MmvProblem p{received_pilot.adjoint(), std::move(pilots), noise_variance};
  p.validate();
  return p;
}

void MmvProblem::validate() const {
  if (y.rows() != pilots.length())
    throw InvalidParameter("MmvProblem: Y has " + std::to_string(y.rows()) +
                           " rows but pilot length is " + std::to_string(pilots.length()));
  if (y.cols() < 1) throw InvalidParameter("MmvProblem: no measurement vectors");
  if (!(noise_variance >= 0.0)) throw InvalidParameter("MmvProblem: negative noise variance");
  if (!y.allFinite()) throw InvalidParameter("MmvProblem: non-finite observations");
}

namespace {

// Support from per-row powers: top-D when D is known, else the relative rule.
Support support_from_scores(const RVector& score, std::optional<int> known, double ratio) {
  const int k = static_cast<int>(score.size());
  const double peak = score.size() ? score.maxCoeff() : 0.0;
  if (!(peak > 0.0)) return Support(k);
  if (known) return Support(k, top_indices(score, *known, 0.0));
  std::vector<int> idx;
  for (int i = 0; i < k; ++i)
    if (score(i) > ratio * peak) idx.push_back(i);
  return Support(k, std::move(idx));
}

// Row covariance (1/M) Y Y^H; every baseline below only needs this L x L statistic.
CMatrix row_covariance(const CMatrix& y) {
  CMatrix phi = y * y.adjoint() / static_cast<double>(y.cols());
  return 0.5 * (phi + phi.adjoint());
}

// Small diagonal loading so noiseless problems stay invertible.
double loading(const CMatrix& phi, double noise_variance) {
  if (noise_variance > 0.0) return noise_variance;
  const double scale = phi.real().trace() / static_cast<double>(phi.rows());
  return std::max(1e-10 * scale, 1e-300);
}

}  // namespace

MmvResult msbl(const MmvProblem& problem, const MsblOptions& options) {
  problem.validate();
  if (options.max_iterations < 1) throw InvalidParameter("msbl: max_iterations must be >= 1");
  if (options.known_sparsity && *options.known_sparsity < 0)
    throw InvalidParameter("msbl: known sparsity must be >= 0");

  const CMatrix& s = problem.pilots.entries();
  const Index len = s.rows();
  const Index k = s.cols();
  const CMatrix phi = row_covariance(problem.y);

  MmvResult res;
  res.row_score = RVector::Zero(k);
  if (phi.cwiseAbs().maxCoeff() == 0.0) {
    // zero data: the hyperparameters' fixed point is gamma = 0
    res.converged = true;
    res.support = Support(static_cast<int>(k));
    return res;
  }

  const double sigma2 = loading(phi, problem.noise_variance);
  RVector gamma = RVector::Ones(k);
  const CMatrix identity = CMatrix::Identity(len, len);

  for (int it = 1; it <= options.max_iterations; ++it) {
    const CMatrix sigma_y = sigma2 * identity + s * gamma.cast<cplx>().asDiagonal() * s.adjoint();
    const CMatrix u = sigma_y.ldlt().solve(s);  // Sigma_y^{-1} s_i per column
    const CMatrix phi_u = phi * u;

    RVector next(k);
    for (Index i = 0; i < k; ++i) {
      const double g = gamma(i);
      if (g == 0.0) {
        next(i) = 0.0;
        continue;
      }
      const double mean_power = g * g * u.col(i).dot(phi_u.col(i)).real();
      const double posterior_var = g - g * g * s.col(i).dot(u.col(i)).real();
      next(i) = std::max(mean_power + posterior_var, 0.0);
    }
    const double peak = next.maxCoeff();
    for (Index i = 0; i < k; ++i)
      if (next(i) < 1e-12 * peak) next(i) = 0.0;

    const double change = (next - gamma).cwiseAbs().maxCoeff();
    gamma = std::move(next);
    res.iterations = it;
    if (!(peak > 0.0) || change < options.convergence_tolerance * peak) {
      res.converged = true;
      break;
    }
  }

  res.row_score = gamma;
  res.support = support_from_scores(gamma, options.known_sparsity, options.prune_tolerance);
  return res;
}

MmvResult bomp(const MmvProblem& problem, int sparsity) {
  problem.validate();
  const CMatrix& s = problem.pilots.entries();
  const int k = static_cast<int>(s.cols());
  if (sparsity < 0 || sparsity > k)
    throw InvalidParameter("bomp: D=" + std::to_string(sparsity) + " outside [0, K=" +
                           std::to_string(k) + "]");

  MmvResult res;
  res.row_score = RVector::Zero(k);
  std::vector<int> chosen;
  std::vector<bool> taken(static_cast<std::size_t>(k), false);
  CMatrix residual = problem.y;

  for (int it = 0; it < sparsity; ++it) {
    const CMatrix corr = s.adjoint() * residual;  // K x M block correlations
    int best = -1;
    double best_score = -1.0;
    for (int i = 0; i < k; ++i) {
      if (taken[static_cast<std::size_t>(i)]) continue;
      const double score = corr.row(i).norm() / s.col(i).norm();
      if (score > best_score) {
        best_score = score;
        best = i;
      }
    }
    chosen.push_back(best);
    taken[static_cast<std::size_t>(best)] = true;
    res.row_score(best) = best_score * best_score;

    const CMatrix sub = select_columns(s, Support(k, chosen));
    const CMatrix coeff = sub.colPivHouseholderQr().solve(problem.y);
    residual = problem.y - sub * coeff;
    res.iterations = it + 1;
  }
  res.converged = true;
  res.support = Support(k, std::move(chosen));
  return res;
}

MmvResult mfocuss(const MmvProblem& problem, const MfocussOptions& options) {
  problem.validate();
  if (!(options.p > 0.0 && options.p <= 1.0)) throw InvalidParameter("mfocuss: p outside (0, 1]");
  if (options.lambda && !(*options.lambda >= 0.0)) throw InvalidParameter("mfocuss: negative lambda");
  if (options.max_iterations < 1) throw InvalidParameter("mfocuss: max_iterations must be >= 1");

  const CMatrix& s = problem.pilots.entries();
  const Index len = s.rows();
  const Index k = s.cols();
  const double snapshots = static_cast<double>(problem.y.cols());
  const CMatrix phi = row_covariance(problem.y);

  MmvResult res;
  res.row_score = RVector::Zero(k);
  if (phi.cwiseAbs().maxCoeff() == 0.0) {
    res.converged = true;
    res.support = Support(static_cast<int>(k));
    return res;
  }

  // default: the weight a noise-only row of per-entry variance sigma_w^2 receives
  const double exponent = 1.0 - options.p / 2.0;
  double lambda = options.lambda.value_or(0.5 * std::pow(snapshots * problem.noise_variance, exponent));
  const CMatrix identity = CMatrix::Identity(len, len);

  // squared row norms ||x_i||^2 of the current estimate; start from the
  // minimum-norm solution (all weights one)
  RVector row_power = RVector::Ones(k);
  bool first = true;

  for (int it = 1; it <= options.max_iterations; ++it) {
    RVector w2(k);  // squared weights: ||x_i||^(2 - p)
    for (Index i = 0; i < k; ++i) w2(i) = first ? 1.0 : std::pow(row_power(i), exponent);
    first = false;

    const CMatrix gram = s * w2.cast<cplx>().asDiagonal() * s.adjoint();
    Eigen::LDLT<CMatrix> inner;
    for (;;) {
      inner.compute(gram + lambda * identity);
      const RVector d = inner.vectorD().real();
      const double dmax = d.cwiseAbs().maxCoeff();
      if (inner.info() == Eigen::Success && d.minCoeff() > 1e-13 * std::max(dmax, 1e-300)) break;
      lambda = lambda > 0.0 ? lambda * 10.0 : 1e-12 * std::max(gram.real().trace(), 1e-300);
      res.regularization_raised = true;
    }

    // x_i = w_i^2 s_i^H C^{-1} Y  =>  ||x_i||^2 = M w_i^4 u_i^H Phi u_i, u = C^{-1} S
    const CMatrix u = inner.solve(s);
    const CMatrix phi_u = phi * u;
    RVector next(k);
    for (Index i = 0; i < k; ++i)
      next(i) = std::max(snapshots * w2(i) * w2(i) * u.col(i).dot(phi_u.col(i)).real(), 0.0);
    const double peak = next.maxCoeff();
    for (Index i = 0; i < k; ++i)
      if (next(i) < 1e-16 * peak) next(i) = 0.0;

    const double change = (next.cwiseSqrt() - row_power.cwiseSqrt()).norm();
    const double size = next.cwiseSqrt().norm();
    row_power = std::move(next);
    res.iterations = it;
    if (!(peak > 0.0) || change < options.convergence_tolerance * size) {
      res.converged = true;
      break;
    }
  }

  res.row_score = row_power / snapshots;
  res.support = support_from_scores(res.row_score, options.known_sparsity, options.prune_tolerance);
  return res;
}

}  // namespace gfad
