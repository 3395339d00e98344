// SPDX-License-Identifier: Apache-2.0
#include "gfad/link.hpp"

#include <cmath>
#include <limits>

namespace gfad {

ModulationScheme::ModulationScheme(std::string name, std::vector<cplx> points)
    : name_(std::move(name)), points_(std::move(points)) {
  if (points_.empty()) throw InvalidParameter("ModulationScheme: empty alphabet");
  double energy = 0.0;
  for (const cplx& p : points_) energy += std::norm(p);
  energy /= static_cast<double>(points_.size());
  if (std::abs(energy - 1.0) > 1e-9)
    throw InvalidParameter("ModulationScheme: mean symbol energy is " + std::to_string(energy) +
                           ", expected 1");
}

ModulationScheme ModulationScheme::bpsk() { return {"bpsk", {{1.0, 0.0}, {-1.0, 0.0}}}; }

ModulationScheme ModulationScheme::qpsk() {
  const double a = 1.0 / std::sqrt(2.0);
  return {"qpsk", {{a, a}, {-a, a}, {-a, -a}, {a, -a}}};
}

ModulationScheme ModulationScheme::qam16() {
  std::vector<cplx> pts;
  const double scale = 1.0 / std::sqrt(10.0);
  for (int i : {-3, -1, 1, 3})
    for (int q : {-3, -1, 1, 3}) pts.emplace_back(scale * i, scale * q);
  return {"16qam", std::move(pts)};
}

ModulationScheme ModulationScheme::by_name(const std::string& name) {
  if (name == "bpsk") return bpsk();
  if (name == "qpsk") return qpsk();
  if (name == "16qam") return qam16();
  throw InvalidParameter("unknown modulation '" + name + "'");
}

double ModulationScheme::min_distance() const {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points_.size(); ++i)
    for (std::size_t j = i + 1; j < points_.size(); ++j) d = std::min(d, std::abs(points_[i] - points_[j]));
  return d;
}

cplx ModulationScheme::point(int index) const {
  if (index == -1) return {0.0, 0.0};
  if (index < 0 || index >= order()) throw InvalidParameter("ModulationScheme: symbol index out of range");
  return points_[static_cast<std::size_t>(index)];
}

SymbolIndices random_symbols(Index rows, Index slots, const ModulationScheme& scheme, Rng& rng) {
  SymbolIndices out(rows, slots);
  for (Index j = 0; j < slots; ++j)
    for (Index i = 0; i < rows; ++i) out(i, j) = rng.uniform_int(0, scheme.order() - 1);
  return out;
}

CMatrix modulate(const SymbolIndices& symbols, const ModulationScheme& scheme) {
  CMatrix out(symbols.rows(), symbols.cols());
  for (Index j = 0; j < symbols.cols(); ++j)
    for (Index i = 0; i < symbols.rows(); ++i) out(i, j) = scheme.point(symbols(i, j));
  return out;
}

namespace {

// Throws SingularSystem unless the Hermitian Gram matrix has condition number
// at most `max_condition`.
void check_condition(const CMatrix& gram, double max_condition, const char* who) {
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(gram, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  const double cond = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  if (!(cond <= max_condition))
    throw SingularSystem(std::string(who) + ": Gram matrix is singular or ill-conditioned", cond);
}

}  // namespace

CMatrix ls_channel_estimate(const CMatrix& received_pilot, const CMatrix& active_pilots,
                            double max_condition) {
  if (received_pilot.cols() != active_pilots.rows())
    throw InvalidParameter("ls_channel_estimate: Y_p has " + std::to_string(received_pilot.cols()) +
                           " columns but pilots have length " + std::to_string(active_pilots.rows()));
  if (active_pilots.cols() > active_pilots.rows())
    throw SingularSystem("ls_channel_estimate: " + std::to_string(active_pilots.cols()) +
                             " active pilots exceed pilot length " +
                             std::to_string(active_pilots.rows()),
                         std::numeric_limits<double>::infinity());
  if (active_pilots.cols() == 0) return CMatrix(received_pilot.rows(), 0);
  const CMatrix gram = active_pilots.adjoint() * active_pilots;
  check_condition(gram, max_condition, "ls_channel_estimate");
  // H = B G^{-1}  <=>  G H^H = B^H for Hermitian G
  return gram.ldlt().solve((received_pilot * active_pilots).adjoint()).adjoint();
}

CMatrix ls_data_decode(const CMatrix& received_data, const CMatrix& channel_estimate,
                       double max_condition) {
  if (received_data.rows() != channel_estimate.rows())
    throw InvalidParameter("ls_data_decode: Y_d has " + std::to_string(received_data.rows()) +
                           " rows but H_hat has " + std::to_string(channel_estimate.rows()));
  if (channel_estimate.cols() > channel_estimate.rows())
    throw SingularSystem("ls_data_decode: more active nodes than receive dimensions",
                         std::numeric_limits<double>::infinity());
  if (channel_estimate.cols() == 0) return CMatrix(0, received_data.cols());
  const CMatrix gram = channel_estimate.adjoint() * channel_estimate;
  check_condition(gram, max_condition, "ls_data_decode");
  return gram.ldlt().solve(channel_estimate.adjoint() * received_data);
}

SymbolIndices demodulate(const CMatrix& soft_symbols, const ModulationScheme& scheme) {
  SymbolIndices out(soft_symbols.rows(), soft_symbols.cols());
  const auto& pts = scheme.points();
  for (Index j = 0; j < soft_symbols.cols(); ++j) {
    for (Index i = 0; i < soft_symbols.rows(); ++i) {
      int best = 0;
      double best_d = std::norm(soft_symbols(i, j) - pts[0]);
      for (int a = 1; a < scheme.order(); ++a) {
        const double d = std::norm(soft_symbols(i, j) - pts[static_cast<std::size_t>(a)]);
        if (d < best_d) {
          best_d = d;
          best = a;
        }
      }
      out(i, j) = best;
    }
  }
  return out;
}

double channel_mse(const CMatrix& true_active, const CMatrix& estimated_active) {
  if (true_active.rows() != estimated_active.rows() || true_active.cols() != estimated_active.cols())
    throw InvalidParameter("channel_mse: dimension mismatch");
  double total = 0.0;
  for (Index k = 0; k < true_active.cols(); ++k) {
    const double energy = true_active.col(k).squaredNorm();
    if (!(energy > 0.0)) throw InvalidParameter("channel_mse: true column " + std::to_string(k) + " is zero");
    total += (true_active.col(k) - estimated_active.col(k)).squaredNorm() / energy;
  }
  return total;
}

double symbol_error_rate(const SymbolIndices& true_symbols, const SymbolIndices& est_symbols,
                         const Support& support_true, const Support& support_hat) {
  if (true_symbols.rows() != support_true.size() || est_symbols.rows() != support_hat.size())
    throw InvalidParameter("symbol_error_rate: symbol rows do not match supports");
  const Index slots = std::max(true_symbols.cols(), est_symbols.cols());
  if ((support_true.size() && true_symbols.cols() != slots) ||
      (support_hat.size() && est_symbols.cols() != slots))
    throw InvalidParameter("symbol_error_rate: symbol blocks have different lengths");

  const Support all = support_union(support_true, support_hat);
  if (all.empty() || slots == 0) return 0.0;

  long errors = 0;
  int ti = 0;
  int ei = 0;
  for (int node : all) {
    const bool in_true = ti < support_true.size() && support_true[static_cast<std::size_t>(ti)] == node;
    const bool in_hat = ei < support_hat.size() && support_hat[static_cast<std::size_t>(ei)] == node;
    for (Index n = 0; n < slots; ++n) {
      const int truth = in_true ? true_symbols(ti, n) : -1;
      const int decided = in_hat ? est_symbols(ei, n) : -1;
      if (truth != decided) ++errors;
    }
    if (in_true) ++ti;
    if (in_hat) ++ei;
  }
  return static_cast<double>(errors) / (static_cast<double>(all.size()) * static_cast<double>(slots));
}

CMatrix spreading_codes(Index chips, Index nodes, Rng& rng) {
  if (chips < 1) throw InvalidParameter("spreading_codes: need at least one chip");
  CMatrix c = rng.complex_normal_matrix(chips, nodes);
  for (Index k = 0; k < nodes; ++k) c.col(k).normalize();
  return c;
}

CMatrix spread_channel(const CMatrix& active_channel, const CMatrix& codes) {
  if (active_channel.cols() != codes.cols())
    throw InvalidParameter("spread_channel: channel and code counts differ");
  const Index m = active_channel.rows();
  CMatrix out(m * codes.rows(), active_channel.cols());
  for (Index k = 0; k < codes.cols(); ++k)
    for (Index c = 0; c < codes.rows(); ++c) out.col(k).segment(c * m, m) = codes(c, k) * active_channel.col(k);
  return out;
}

}  // namespace gfad
