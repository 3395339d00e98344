// SPDX-License-Identifier: Apache-2.0
#include "gfad/model.hpp"

#include <numbers>
#include <numeric>

#include "gfad/pilots.hpp"

namespace gfad {

Support draw_support(int num_nodes, const ActivityModel& activity, Rng& rng) {
  if (num_nodes < 1) throw InvalidParameter("draw_support: K must be >= 1");

  std::vector<int> chosen;
  if (const auto* fixed = std::get_if<FixedActivity>(&activity)) {
    if (fixed->count < 0 || fixed->count > num_nodes)
      throw InvalidParameter("draw_support: D=" + std::to_string(fixed->count) +
                             " outside [0, K=" + std::to_string(num_nodes) + "]");
    // partial Fisher-Yates
    std::vector<int> pool(num_nodes);
    std::iota(pool.begin(), pool.end(), 0);
    for (int i = 0; i < fixed->count; ++i) {
      const int j = rng.uniform_int(i, num_nodes - 1);
      std::swap(pool[i], pool[j]);
    }
    chosen.assign(pool.begin(), pool.begin() + fixed->count);
  } else {
    const double p = std::get<BernoulliActivity>(activity).probability;
    if (!(p >= 0.0 && p <= 1.0))
      throw InvalidParameter("draw_support: activation probability outside [0, 1]");
    for (int k = 0; k < num_nodes; ++k)
      if (rng.bernoulli(p)) chosen.push_back(k);
  }
  return Support(num_nodes, std::move(chosen));
}

CVector steering_vector(Index antennas, double theta, double spacing_ratio) {
  if (antennas < 1) throw InvalidParameter("steering_vector: M must be >= 1");
  if (!(spacing_ratio > 0.0)) throw InvalidParameter("steering_vector: spacing ratio must be positive");
  CVector a(antennas);
  const double phase_step = -2.0 * std::numbers::pi * spacing_ratio * std::cos(theta);
  for (Index m = 0; m < antennas; ++m) a(m) = std::polar(1.0, phase_step * static_cast<double>(m));
  return a;
}

namespace {

void check_support_fits(const Support& support, const char* who) {
  if (support.num_nodes() < 1) throw InvalidParameter(std::string(who) + ": support has K = 0");
}

}  // namespace

ChannelMatrix draw_channel_ula(Index antennas, const Support& support, Rng& rng,
                               const UlaOptions& options) {
  check_support_fits(support, "draw_channel_ula");
  if (antennas < 1) throw InvalidParameter("draw_channel_ula: M must be >= 1");
  if (options.paths < 1) throw InvalidParameter("draw_channel_ula: P must be >= 1");

  ChannelMatrix h{CMatrix::Zero(antennas, support.num_nodes()), support,
                  RVector::Zero(support.num_nodes())};
  const double scale = 1.0 / std::sqrt(static_cast<double>(options.paths));
  const double half_pi = std::numbers::pi / 2.0;
  for (int k : support) {
    for (int p = 0; p < options.paths; ++p) {
      const cplx gain = rng.complex_normal(1.0);
      const double theta = rng.uniform(-half_pi, half_pi);
      h.entries.col(k) += (scale * gain) * steering_vector(antennas, theta, options.spacing_ratio);
    }
    h.variances(k) = 1.0;
  }
  return h;
}

ChannelMatrix draw_channel_gaussian(Index antennas, const Support& support, Rng& rng,
                                    const RVector& variances) {
  check_support_fits(support, "draw_channel_gaussian");
  if (antennas < 1) throw InvalidParameter("draw_channel_gaussian: M must be >= 1");
  const int num_nodes = support.num_nodes();
  if (variances.size() != 0 && variances.size() != num_nodes)
    throw InvalidParameter("draw_channel_gaussian: variance vector must have length K");

  ChannelMatrix h{CMatrix::Zero(antennas, num_nodes), support, RVector::Zero(num_nodes)};
  for (int k : support) {
    const double var = variances.size() == 0 ? 1.0 : variances(k);
    if (!(var > 0.0) || !std::isfinite(var))
      throw InvalidParameter("draw_channel_gaussian: node " + std::to_string(k) +
                             " has nonpositive variance");
    for (Index m = 0; m < antennas; ++m) h.entries(m, k) = rng.complex_normal(var);
    h.variances(k) = var;
  }
  return h;
}

CMatrix received_pilot(const CMatrix& channel, const PilotDictionary& pilots,
                       const NoiseSpec& noise, Rng& rng) {
  if (channel.cols() != pilots.nodes())
    throw InvalidParameter("received_pilot: H has " + std::to_string(channel.cols()) +
                           " columns but S has " + std::to_string(pilots.nodes()));
  if (noise.variance < 0.0) throw InvalidParameter("received_pilot: negative noise variance");
  CMatrix y = channel * pilots.entries().adjoint();
  if (noise.variance > 0.0) y += rng.complex_normal_matrix(y.rows(), y.cols(), noise.variance);
  return y;
}

CMatrix received_data(const CMatrix& active_channel, const CMatrix& symbols,
                      const NoiseSpec& noise, Rng& rng) {
  if (active_channel.cols() != symbols.rows())
    throw InvalidParameter("received_data: H_active has " + std::to_string(active_channel.cols()) +
                           " columns but D has " + std::to_string(symbols.rows()) + " rows");
  if (noise.variance < 0.0) throw InvalidParameter("received_data: negative noise variance");
  CMatrix y = active_channel * symbols;
  if (noise.variance > 0.0) y += rng.complex_normal_matrix(y.rows(), y.cols(), noise.variance);
  return y;
}

}  // namespace gfad
