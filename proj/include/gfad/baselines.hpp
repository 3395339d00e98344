// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>

#include "gfad/common.hpp"
#include "gfad/pilots.hpp"

namespace gfad {

/// Y = S H^H + W^H: L x M observations sharing one row support.
struct MmvProblem {
  CMatrix y;
  PilotDictionary pilots;
  double noise_variance = 0.0;

  /// From the M x L received pilot Y_p (takes its conjugate transpose).
  static MmvProblem from_received(const CMatrix& received_pilot, PilotDictionary pilots,
                                  double noise_variance);
  void validate() const;
};

/// Outcome shared by the baseline solvers. `row_score` is the per-node power
/// estimate the support was read from.
struct MmvResult {
  Support support;
  RVector row_score;
  int iterations = 0;
  bool converged = false;
  /// M-FOCUSS only: the inner system was singular and lambda had to be raised.
  bool regularization_raised = false;
};

struct MsblOptions {
  int max_iterations = 500;
  /// Stop when max |gamma_new - gamma| < tolerance * max gamma.
  double convergence_tolerance = 1e-6;
  /// Keep rows with gamma > prune_tolerance * max gamma (unless D is known).
  double prune_tolerance = 0.1;
  std::optional<int> known_sparsity;
};

/// M-SBL: EM on the row-sparse Gaussian prior, noise variance frozen at the true value.
MmvResult msbl(const MmvProblem& problem, const MsblOptions& options = {});

/// Block OMP on y = (S kron I_M) h + w, evaluated without forming the Kronecker
/// matrix: the score of block k is ||s_k^H R|| for the current L x M residual R.
MmvResult bomp(const MmvProblem& problem, int sparsity);

struct MfocussOptions {
  double p = 0.8;
  /// Tikhonov weight of the inner solve. When empty, 0.5 (M sigma_w^2)^(1 - p/2):
  /// half the weight a noise-only row would carry.
  std::optional<double> lambda;
  int max_iterations = 500;
  double convergence_tolerance = 1e-6;
  /// Keep rows whose squared norm exceeds prune_tolerance * max (unless D is known).
  double prune_tolerance = 0.1;
  std::optional<int> known_sparsity;
};

/// Regularized M-FOCUSS: reweighted minimum-norm solves with row weights ||x_i||^(1 - p/2).
MmvResult mfocuss(const MmvProblem& problem, const MfocussOptions& options = {});

}  // namespace gfad
