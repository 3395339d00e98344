// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <iosfwd>

#include "gfad/common.hpp"
#include "gfad/rng.hpp"

namespace gfad {

enum class PilotKind { GaussianRandom, UserSupplied };

/// L x K training dictionary with unit-norm columns. Immutable once built;
/// the mutual coherence is computed at construction.
class PilotDictionary {
 public:
  /// Normalizes every column of `entries` to unit norm. Zero or non-finite
  /// columns are rejected.
  PilotDictionary(CMatrix entries, PilotKind kind = PilotKind::UserSupplied);

  const CMatrix& entries() const noexcept { return entries_; }
  Index length() const noexcept { return entries_.rows(); }
  Index nodes() const noexcept { return entries_.cols(); }
  /// max_{i != j} |s_i^H s_j|; 0 for a single-column dictionary.
  double coherence() const noexcept { return coherence_; }
  PilotKind kind() const noexcept { return kind_; }
  /// max |S_{l,k}|
  double max_abs_entry() const { return entries_.cwiseAbs().maxCoeff(); }

 private:
  CMatrix entries_;
  double coherence_ = 0.0;
  PilotKind kind_;
};

PilotDictionary gen_gaussian_dictionary(Index length, Index nodes, Rng& rng);

/// Scales every column to unit norm.
CMatrix normalize_columns(const CMatrix& m);

/// Maximum absolute inner product between distinct normalized columns.
double mutual_coherence(const CMatrix& m);
double mutual_coherence(const PilotDictionary& s);

/// Column-wise Kronecker product conj(S) (.) S, column k = conj(s_k) kron s_k
/// (L^2 x K), so that vec(S diag(r) S^H) = khatri_rao(S) r for column-major vec.
CMatrix khatri_rao(const CMatrix& s);

/// Coherence of conj(S) (.) S given the coherence of S: mu^2.
double khatri_rao_coherence(double mu);

/// sqrt((K - L) / ((K - 1) L)), or 0 when K <= L.
double welch_bound(Index nodes, Index length);

/// Largest D with D < (1 + 1/mu^2) / 2.
int max_identifiable_support(double mu);

/// Smallest L with L > (2 K D - K) / (K + 2 D - 2), capped at K.
int min_pilot_length(int nodes, int max_active);

// CSV exchange. First line `L=<L>,K=<K>`, then L rows of 2K values
// re(S_l0),im(S_l0),re(S_l1),... with 17 significant digits.
void write_dictionary_csv(const PilotDictionary& s, std::ostream& out);
void write_dictionary_csv(const PilotDictionary& s, const std::filesystem::path& path);
PilotDictionary read_dictionary_csv(std::istream& in);
PilotDictionary read_dictionary_csv(const std::filesystem::path& path);

}  // namespace gfad
