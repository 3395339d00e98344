// SPDX-License-Identifier: Apache-2.0
#include "gfad/pilots.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace gfad {

CMatrix normalize_columns(const CMatrix& m) {
  CMatrix out = m;
  for (Index k = 0; k < out.cols(); ++k) {
    const double n = out.col(k).norm();
    if (!(n > 0.0) || !std::isfinite(n))
      throw InvalidParameter("normalize_columns: column " + std::to_string(k) +
                             " is zero or not finite");
    out.col(k) /= n;
  }
  return out;
}

double mutual_coherence(const CMatrix& m) {
  if (m.cols() < 2) throw InvalidParameter("mutual_coherence: need at least two columns");
  const CMatrix s = normalize_columns(m);
  const CMatrix gram = s.adjoint() * s;
  double mu = 0.0;
  for (Index j = 1; j < gram.cols(); ++j)
    for (Index i = 0; i < j; ++i) mu = std::max(mu, std::abs(gram(i, j)));
  return std::min(mu, 1.0);
}

double mutual_coherence(const PilotDictionary& s) {
  if (s.nodes() < 2) throw InvalidParameter("mutual_coherence: need at least two columns");
  return s.coherence();
}

PilotDictionary::PilotDictionary(CMatrix entries, PilotKind kind) : kind_(kind) {
  if (entries.rows() < 1 || entries.cols() < 1)
    throw InvalidParameter("PilotDictionary: L and K must be >= 1");
  entries_ = normalize_columns(entries);
  coherence_ = entries_.cols() >= 2 ? mutual_coherence(entries_) : 0.0;
}

PilotDictionary gen_gaussian_dictionary(Index length, Index nodes, Rng& rng) {
  if (length < 1 || nodes < 1) throw InvalidParameter("gen_gaussian_dictionary: L and K must be >= 1");
  return PilotDictionary(rng.complex_normal_matrix(length, nodes), PilotKind::GaussianRandom);
}

CMatrix khatri_rao(const CMatrix& s) {
  const Index len = s.rows();
  CMatrix a(len * len, s.cols());
  for (Index k = 0; k < s.cols(); ++k)
    for (Index j = 0; j < len; ++j)
      a.col(k).segment(j * len, len) = std::conj(s(j, k)) * s.col(k);
  return a;
}

double khatri_rao_coherence(double mu) {
  if (!(mu >= 0.0 && mu <= 1.0)) throw InvalidParameter("khatri_rao_coherence: mu outside [0, 1]");
  return mu * mu;
}

double welch_bound(Index nodes, Index length) {
  if (nodes < 2 || length < 1) throw InvalidParameter("welch_bound: need K >= 2 and L >= 1");
  if (nodes <= length) return 0.0;
  const auto k = static_cast<double>(nodes);
  const auto l = static_cast<double>(length);
  return std::sqrt((k - l) / ((k - 1.0) * l));
}

int max_identifiable_support(double mu) {
  if (!(mu > 0.0) || mu > 1.0) throw InvalidParameter("max_identifiable_support: mu outside (0, 1]");
  const double limit = 0.5 * (1.0 + 1.0 / (mu * mu));
  return static_cast<int>(std::ceil(limit)) - 1;
}

int min_pilot_length(int nodes, int max_active) {
  if (nodes < 2) throw InvalidParameter("min_pilot_length: need K >= 2");
  if (max_active < 1 || max_active > nodes)
    throw InvalidParameter("min_pilot_length: D_max outside [1, K]");
  const double k = nodes;
  const double d = max_active;
  const double bound = (2.0 * k * d - k) / (k + 2.0 * d - 2.0);
  const int length = static_cast<int>(std::floor(bound)) + 1;
  return std::min(length, nodes);
}

void write_dictionary_csv(const PilotDictionary& s, std::ostream& out) {
  const CMatrix& e = s.entries();
  out << "L=" << e.rows() << ",K=" << e.cols() << '\n';
  out << std::setprecision(17);
  for (Index l = 0; l < e.rows(); ++l) {
    for (Index k = 0; k < e.cols(); ++k) {
      if (k) out << ',';
      out << e(l, k).real() << ',' << e(l, k).imag();
    }
    out << '\n';
  }
}

void write_dictionary_csv(const PilotDictionary& s, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_dictionary_csv(s, out);
  if (!out) throw IoError("write failed: " + path.string());
}

PilotDictionary read_dictionary_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidParameter("dictionary csv: missing header");
  long rows = 0;
  long cols = 0;
  if (std::sscanf(line.c_str(), "L=%ld,K=%ld", &rows, &cols) != 2 || rows < 1 || cols < 1)
    throw InvalidParameter("dictionary csv: bad header '" + line + "'");

  CMatrix e(rows, cols);
  for (long l = 0; l < rows; ++l) {
    if (!std::getline(in, line))
      throw InvalidParameter("dictionary csv: expected " + std::to_string(rows) + " rows");
    std::istringstream fields(line);
    std::string re_field;
    std::string im_field;
    for (long k = 0; k < cols; ++k) {
      if (!std::getline(fields, re_field, ',') || !std::getline(fields, im_field, ','))
        throw InvalidParameter("dictionary csv: row " + std::to_string(l) + " is short");
      try {
        e(l, k) = {std::stod(re_field), std::stod(im_field)};
      } catch (const std::exception&) {
        throw InvalidParameter("dictionary csv: bad number in row " + std::to_string(l));
      }
    }
  }
  return PilotDictionary(std::move(e), PilotKind::UserSupplied);
}

PilotDictionary read_dictionary_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_dictionary_csv(in);
}

}  // namespace gfad
