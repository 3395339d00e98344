// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <variant>

#include "gfad/common.hpp"
#include "gfad/rng.hpp"

namespace gfad {

class PilotDictionary;

/// Exactly `count` active nodes, drawn uniformly without replacement.
struct FixedActivity {
  int count = 0;
};

/// Each node active independently with probability `probability`.
struct BernoulliActivity {
  double probability = 0.0;
};

using ActivityModel = std::variant<FixedActivity, BernoulliActivity>;

/// M x K channel; columns outside `support` are exactly zero.
struct ChannelMatrix {
  CMatrix entries;
  Support support;
  /// Per-node large-scale variance, length K (zero for inactive nodes).
  RVector variances;

  Index antennas() const { return entries.rows(); }
  Index nodes() const { return entries.cols(); }
  /// M x |support| matrix of the active columns.
  CMatrix active_columns() const { return select_columns(entries, support); }
};

/// Per-entry complex noise variance. SNR = 1 / variance for unit-energy symbols.
struct NoiseSpec {
  double variance = 0.0;

  static NoiseSpec from_snr_db(double snr_db) { return {1.0 / db_to_linear(snr_db)}; }
};

Support draw_support(int num_nodes, const ActivityModel& activity, Rng& rng);

/// ULA response, element m equals exp(-j 2 pi m (d/lambda) cos(theta)).
CVector steering_vector(Index antennas, double theta, double spacing_ratio = 0.5);

struct UlaOptions {
  int paths = 200;
  double spacing_ratio = 0.5;
};

/// Geometric multipath channel: h_k = P^{-1/2} sum_p g_kp a(theta_p),
/// g_kp ~ CN(0, 1), theta_p ~ U[-pi/2, pi/2].
ChannelMatrix draw_channel_ula(Index antennas, const Support& support, Rng& rng,
                               const UlaOptions& options = {});

/// I.i.d. CN(0, sigma_k^2) entries in every active column. `variances` is either
/// empty (all ones) or of length K.
ChannelMatrix draw_channel_gaussian(Index antennas, const Support& support, Rng& rng,
                                    const RVector& variances = {});

/// H * S^H + W.
CMatrix received_pilot(const CMatrix& channel, const PilotDictionary& pilots,
                       const NoiseSpec& noise, Rng& rng);

/// H_active * D + W.
CMatrix received_data(const CMatrix& active_channel, const CMatrix& symbols,
                      const NoiseSpec& noise, Rng& rng);

}  // namespace gfad
