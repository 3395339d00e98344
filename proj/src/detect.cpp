// SPDX-License-Identifier: Apache-2.0
#include "gfad/detect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace gfad {

void LassoOptions::validate() const {
  if (lambda && !(*lambda >= 0.0 && std::isfinite(*lambda)))
    throw InvalidParameter("LassoOptions: lambda must be finite and >= 0");
  if (!(lambda_scale >= 0.0)) throw InvalidParameter("LassoOptions: lambda_scale must be >= 0");
  if (max_iterations < 1) throw InvalidParameter("LassoOptions: max_iterations must be >= 1");
  if (!(objective_tolerance >= 0.0) || !(step_tolerance >= 0.0))
    throw InvalidParameter("LassoOptions: negative tolerance");
  if (!(threshold_ratio > 0.0 && threshold_ratio < 1.0))
    throw InvalidParameter("LassoOptions: threshold ratio must lie in (0, 1)");
  if (known_sparsity && *known_sparsity < 0)
    throw InvalidParameter("LassoOptions: known sparsity must be >= 0");
}

CMatrix sample_covariance(const CMatrix& received_pilot) {
  if (received_pilot.rows() < 1 || received_pilot.cols() < 1)
    throw InvalidParameter("sample_covariance: empty received pilot");
  // Rows are antennas: sum_m y_m^H y_m = Y^H Y.
  CMatrix phi = received_pilot.adjoint() * received_pilot;
  phi /= static_cast<double>(received_pilot.rows());
  // exact Hermitian symmetry
  phi = (0.5 * (phi + phi.adjoint())).eval();
  return phi;
}

SmvProblem build_smv(const CMatrix& phi_yy, const PilotDictionary& pilots, double noise_variance) {
  const Index len = pilots.length();
  if (phi_yy.rows() != len || phi_yy.cols() != len)
    throw InvalidParameter("build_smv: covariance is " + std::to_string(phi_yy.rows()) + "x" +
                           std::to_string(phi_yy.cols()) + " but pilot length is " +
                           std::to_string(len));
  if (!(noise_variance >= 0.0)) throw InvalidParameter("build_smv: negative noise variance");

  SmvProblem p{khatri_rao(pilots.entries()), CVector(len * len)};
  p.x = Eigen::Map<const CVector>(phi_yy.data(), len * len);
  for (Index l = 0; l < len; ++l) p.x(l * len + l) -= noise_variance;
  return p;
}

CovarianceSketch covariance_sketch(const CMatrix& received_pilot, double noise_variance) {
  if (!(noise_variance >= 0.0)) throw InvalidParameter("covariance_sketch: negative noise variance");
  CovarianceSketch sk;
  sk.phi_yy = sample_covariance(received_pilot);
  const Index len = sk.phi_yy.rows();
  sk.x = Eigen::Map<const CVector>(sk.phi_yy.data(), len * len);
  for (Index l = 0; l < len; ++l) sk.x(l * len + l) -= noise_variance;
  sk.antennas_used = received_pilot.rows();
  return sk;
}

double default_lambda(const CMatrix& a, const CVector& x, Index antennas, double scale) {
  if (antennas < 1) throw InvalidParameter("default_lambda: M must be >= 1");
  const double k = static_cast<double>(a.cols());
  const double corr = (a.adjoint() * x).cwiseAbs().maxCoeff();
  return scale * corr * std::sqrt(std::log(k) / static_cast<double>(antennas));
}

namespace {

// Largest eigenvalue of a symmetric PSD matrix by power iteration.
double power_iteration(const RMatrix& g, int iterations = 200) {
  RVector v = RVector::Constant(g.rows(), 1.0 / std::sqrt(static_cast<double>(g.rows())));
  double estimate = 0.0;
  for (int it = 0; it < iterations; ++it) {
    RVector w = g * v;
    const double n = w.norm();
    if (n == 0.0) return 0.0;
    const double next = v.dot(w);
    v = w / n;
    if (it > 10 && std::abs(next - estimate) <= 1e-10 * std::abs(next)) return next;
    estimate = next;
  }
  return estimate;
}

// Quadratic model of 0.5 ||A r - x||^2 for real r: 0.5 r'Gr - b'r + c.
struct Quadratic {
  RMatrix g;
  RVector b;
  double c = 0.0;

  double smooth(const RVector& r) const { return 0.5 * r.dot(g * r) - b.dot(r) + c; }
  RVector gradient(const RVector& r) const { return g * r - b; }
};

RVector project_shrink(const RVector& v, double threshold) {
  return (v.array() - threshold).max(0.0).matrix();
}

}  // namespace

DetectionResult nn_lasso(const CMatrix& a, const CVector& x, const LassoOptions& options) {
  options.validate();
  if (!options.lambda) throw InvalidParameter("nn_lasso: lambda is not set");
  if (a.rows() == 0 || a.cols() == 0) throw InvalidParameter("nn_lasso: empty dictionary");
  if (a.rows() != x.size())
    throw InvalidParameter("nn_lasso: A has " + std::to_string(a.rows()) + " rows but x has " +
                           std::to_string(x.size()) + " entries");
  if (!a.allFinite() || !x.allFinite()) throw InvalidParameter("nn_lasso: non-finite input");

  const double lambda = *options.lambda;
  const Index k = a.cols();
  Quadratic q{(a.adjoint() * a).real(), (a.adjoint() * x).real(), 0.5 * x.squaredNorm()};
  q.g = (0.5 * (q.g + q.g.transpose())).eval();

  auto objective = [&](const RVector& r) { return q.smooth(r) + lambda * r.sum(); };

  double lipschitz = power_iteration(q.g) * 1.01;
  if (!(lipschitz > 0.0)) lipschitz = 1.0;

  // One projected proximal-gradient step from `from`, backtracking on the
  // Lipschitz estimate until the quadratic upper bound holds.
  auto prox_step = [&](const RVector& from) {
    const RVector grad = q.gradient(from);
    const double f_from = q.smooth(from);
    for (;;) {
      RVector to = project_shrink(from - grad / lipschitz, lambda / lipschitz);
      const RVector diff = to - from;
      const double upper = f_from + grad.dot(diff) + 0.5 * lipschitz * diff.squaredNorm();
      if (q.smooth(to) <= upper + 1e-12 * std::max(1.0, std::abs(upper))) return to;
      lipschitz *= 2.0;
    }
  };

  // F(to) - F(from) from the step itself, free of cancellation near the optimum
  auto change = [&](const RVector& from, const RVector& to) {
    const RVector d = to - from;
    return d.dot(q.gradient(from)) + 0.5 * d.dot(q.g * d) + lambda * d.sum();
  };

  DetectionResult res;
  res.lambda = lambda;
  RVector r = RVector::Zero(k);
  RVector y = r;
  double t = 1.0;
  double f_prev = objective(r);
  if (options.record_objective) res.objective_trace.push_back(f_prev);

  int it = 0;
  for (it = 1; it <= options.max_iterations; ++it) {
    RVector z = prox_step(y);
    double delta = change(r, z);
    if (delta > 0.0) {
      // momentum overshot: restart from the last accepted iterate
      t = 1.0;
      z = prox_step(r);
      delta = change(r, z);
      if (delta > 0.0) {
        // no further decrease representable in floating point
        res.converged = true;
        break;
      }
    }
    const double scale = std::max(std::abs(f_prev), std::numeric_limits<double>::min());
    const double step = (z - r).cwiseAbs().maxCoeff();
    const double size = std::max(z.maxCoeff(), std::numeric_limits<double>::min());

    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = z + ((t - 1.0) / t_next) * (z - r);
    r = std::move(z);
    t = t_next;

    f_prev += delta;
    if (options.record_objective) res.objective_trace.push_back(f_prev);
    if (-delta <= options.objective_tolerance * scale && step <= options.step_tolerance * size) {
      res.converged = true;
      break;
    }
  }

  res.iterations = std::min(it, options.max_iterations);
  res.r_hat = r;
  res.final_objective = 0.5 * (a * r.cast<cplx>() - x).squaredNorm() + lambda * r.sum();
  res.residual_norm = (a * r.cast<cplx>() - x).norm();
  res.support_hat = extract_support(res.r_hat, options);
  return res;
}

std::vector<int> top_indices(const RVector& score, int count, double floor) {
  std::vector<int> order(static_cast<std::size_t>(score.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return score(i) > score(j); });
  std::vector<int> out;
  for (int i : order) {
    if (static_cast<int>(out.size()) >= count) break;
    if (score(i) > floor) out.push_back(i);
  }
  return out;
}

Support extract_support(const RVector& r_hat, const LassoOptions& options) {
  const int k = static_cast<int>(r_hat.size());
  if (k == 0) return Support(0);
  if ((r_hat.array() < 0.0).any()) throw InvalidParameter("extract_support: negative entry");
  const double peak = r_hat.maxCoeff();
  if (!(peak > 0.0)) return Support(k);

  if (options.known_sparsity) return Support(k, top_indices(r_hat, *options.known_sparsity, 0.0));

  std::vector<int> idx;
  const double cut = options.threshold_ratio * peak;
  for (int i = 0; i < k; ++i)
    if (r_hat(i) > cut) idx.push_back(i);
  return Support(k, std::move(idx));
}

DetectionResult detect_activity(const CMatrix& received_pilot, const PilotDictionary& pilots,
                                double noise_variance, const LassoOptions& options) {
  options.validate();
  if (received_pilot.cols() != pilots.length())
    throw InvalidParameter("detect_activity: received pilot has " +
                           std::to_string(received_pilot.cols()) + " columns but L = " +
                           std::to_string(pilots.length()));
  const CMatrix phi = sample_covariance(received_pilot);
  const SmvProblem smv = build_smv(phi, pilots, noise_variance);

  LassoOptions resolved = options;
  if (!resolved.lambda)
    resolved.lambda = default_lambda(smv.a, smv.x, received_pilot.rows(), options.lambda_scale);
  return nn_lasso(smv.a, smv.x, resolved);
}

}  // namespace gfad
