// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "gfad/common.hpp"
#include "gfad/rng.hpp"

namespace gfad {

/// Unit-average-energy constellation. Inactive nodes transmit the extra
/// symbol 0 of the augmented alphabet, encoded as index -1.
class ModulationScheme {
 public:
  ModulationScheme(std::string name, std::vector<cplx> points);

  static ModulationScheme bpsk();
  static ModulationScheme qpsk();
  static ModulationScheme qam16();
  /// "bpsk", "qpsk" or "16qam".
  static ModulationScheme by_name(const std::string& name);

  const std::string& name() const noexcept { return name_; }
  const std::vector<cplx>& points() const noexcept { return points_; }
  int order() const noexcept { return static_cast<int>(points_.size()); }
  double min_distance() const;

  /// Augmented-alphabet lookup: index -1 maps to 0.
  cplx point(int index) const;

 private:
  std::string name_;
  std::vector<cplx> points_;
};

using SymbolIndices = Eigen::MatrixXi;

/// Uniformly random symbol indices, rows x N.
SymbolIndices random_symbols(Index rows, Index slots, const ModulationScheme& scheme, Rng& rng);
CMatrix modulate(const SymbolIndices& symbols, const ModulationScheme& scheme);

/// H_hat = Y_p S_hat (S_hat^H S_hat)^{-1}. Throws SingularSystem when the Gram
/// matrix is rank deficient or its condition number exceeds `max_condition`.
CMatrix ls_channel_estimate(const CMatrix& received_pilot, const CMatrix& active_pilots,
                            double max_condition = 1e12);

/// D_hat = (H^H H)^{-1} H^H Y_d.
CMatrix ls_data_decode(const CMatrix& received_data, const CMatrix& channel_estimate,
                       double max_condition = 1e12);

/// Nearest constellation point per entry; ties go to the lower alphabet index.
SymbolIndices demodulate(const CMatrix& soft_symbols, const ModulationScheme& scheme);

/// sum_k ||h_k - h_hat_k||^2 / ||h_k||^2 over the active columns.
double channel_mse(const CMatrix& true_active, const CMatrix& estimated_active);

/// Fraction of (node, slot) cells over (true support U detected support) x N whose
/// augmented-alphabet value differs. Row i of `true_symbols` belongs to
/// support_true[i], row j of `est_symbols` to support_hat[j].
double symbol_error_rate(const SymbolIndices& true_symbols, const SymbolIndices& est_symbols,
                         const Support& support_true, const Support& support_hat);

/// Random unit-norm spreading codes, one column of length `chips` per node.
CMatrix spreading_codes(Index chips, Index nodes, Rng& rng);

/// Effective M*chips x K_a channel of spread transmission: column k is c_k kron h_k,
/// so vec(sum_k h_k d_k c_k^T) = spread_channel(H, C) d.
CMatrix spread_channel(const CMatrix& active_channel, const CMatrix& codes);

}  // namespace gfad
