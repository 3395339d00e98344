// SPDX-License-Identifier: Apache-2.0
#include "gfad/rng.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gfad {

// splitmix64 finalizer
std::uint64_t Rng::mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng Rng::stream(std::uint64_t master_seed, std::uint64_t index) {
  return Rng(mix(master_seed) ^ mix(index + 0x632be59bd9b4e019ULL));
}

Rng Rng::split(std::uint64_t tag) { return Rng(engine_() ^ mix(tag)); }

double Rng::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

double Rng::standard_normal() { return normal_(engine_); }

cplx Rng::complex_normal(double variance) {
  const double s = std::sqrt(variance / 2.0);
  const double re = normal_(engine_);
  const double im = normal_(engine_);
  return {s * re, s * im};
}

bool Rng::bernoulli(double p) { return std::bernoulli_distribution(p)(engine_); }

int Rng::uniform_int(int lo, int hi_inclusive) {
  return std::uniform_int_distribution<int>(lo, hi_inclusive)(engine_);
}

CMatrix Rng::complex_normal_matrix(Index rows, Index cols, double variance) {
  CMatrix m(rows, cols);
  // column-major fill order is part of the determinism contract
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = complex_normal(variance);
  return m;
}

// -- Support ----------------------------------------------------------------

Support::Support(int num_nodes, std::vector<int> indices)
    : num_nodes_(num_nodes), indices_(std::move(indices)) {
  if (num_nodes < 0) throw InvalidParameter("Support: negative node count");
  std::sort(indices_.begin(), indices_.end());
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (indices_[i] < 0 || indices_[i] >= num_nodes_)
      throw InvalidParameter("Support: index " + std::to_string(indices_[i]) +
                             " outside [0, " + std::to_string(num_nodes_) + ")");
    if (i > 0 && indices_[i] == indices_[i - 1])
      throw InvalidParameter("Support: duplicate index " + std::to_string(indices_[i]));
  }
}

bool Support::contains(int k) const {
  return std::binary_search(indices_.begin(), indices_.end(), k);
}

Support support_union(const Support& a, const Support& b) {
  if (a.num_nodes() != b.num_nodes()) throw InvalidParameter("support_union: node counts differ");
  std::vector<int> u;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(u));
  return Support(a.num_nodes(), std::move(u));
}

std::string to_string(const Support& s) {
  std::ostringstream os;
  os << '{';
  for (int i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
  os << '}';
  return os.str();
}

CMatrix select_columns(const CMatrix& m, const Support& support) {
  CMatrix out(m.rows(), support.size());
  for (int i = 0; i < support.size(); ++i) {
    if (support[i] >= m.cols()) throw InvalidParameter("select_columns: index out of range");
    out.col(i) = m.col(support[i]);
  }
  return out;
}

}  // namespace gfad
