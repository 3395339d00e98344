// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "gfad/common.hpp"
#include "gfad/pilots.hpp"

namespace gfad {

/// Sample covariance of the received pilots and its noise-mean-removed vectorization.
struct CovarianceSketch {
  CMatrix phi_yy;  ///< L x L, Hermitian PSD
  CVector x;       ///< vec(phi_yy) - sigma_w^2 vec(I_L), length L^2
  Index antennas_used = 0;
};

struct LassoOptions {
  /// Regularization weight. When empty, detect_activity picks
  /// lambda_scale * ||A^H x||_inf * sqrt(log K / M).
  std::optional<double> lambda;
  double lambda_scale = 0.1;
  int max_iterations = 5000;
  /// Stop when the relative objective decrease of an iteration falls below this ...
  double objective_tolerance = 1e-12;
  /// ... and the largest entry change of the iterate falls below this times max(r).
  double step_tolerance = 1e-10;
  /// Relative threshold tau in (0, 1): keep entries above tau * max(r_hat).
  double threshold_ratio = 0.1;
  /// When set, keep exactly this many of the largest positive entries instead.
  std::optional<int> known_sparsity;
  /// Keep the objective value of every iteration in DetectionResult::objective_trace.
  bool record_objective = false;

  void validate() const;
};

struct DetectionResult {
  RVector r_hat;  ///< nonnegative, length K
  Support support_hat;
  int iterations = 0;
  bool converged = false;
  double final_objective = 0.0;
  double residual_norm = 0.0;
  double lambda = 0.0;
  std::vector<double> objective_trace;
};

/// Single-measurement-vector form of the covariance detection problem.
struct SmvProblem {
  CMatrix a;  ///< conj(S) (.) S, L^2 x K
  CVector x;  ///< length L^2
};

/// (1/M) sum_m y_m^H y_m over the M antenna rows y_m of the M x L received pilot.
CMatrix sample_covariance(const CMatrix& received_pilot);

CovarianceSketch covariance_sketch(const CMatrix& received_pilot, double noise_variance);

SmvProblem build_smv(const CMatrix& phi_yy, const PilotDictionary& pilots, double noise_variance);

double default_lambda(const CMatrix& a, const CVector& x, Index antennas, double scale);

/// min_{r >= 0} 0.5 ||A r - x||^2 + lambda sum(r) for real r and complex A, x.
/// `options.lambda` must be set.
DetectionResult nn_lasso(const CMatrix& a, const CVector& x, const LassoOptions& options);

Support extract_support(const RVector& r_hat, const LassoOptions& options);

/// Full covariance-domain pipeline: sketch, lift, solve, threshold.
DetectionResult detect_activity(const CMatrix& received_pilot, const PilotDictionary& pilots,
                                double noise_variance, const LassoOptions& options);

/// Indices of the `count` largest entries of `score` that exceed `floor`;
/// ties go to the lower index.
std::vector<int> top_indices(const RVector& score, int count, double floor);

}  // namespace gfad
