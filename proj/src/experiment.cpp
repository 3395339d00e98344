// SPDX-License-Identifier: Apache-2.0
#include "gfad/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "gfad/baselines.hpp"
#include "gfad/detect.hpp"
#include "gfad/link.hpp"
#include "gfad/model.hpp"

namespace gfad {

namespace {

// Sub-stream tags inside one trial.
enum StreamTag : std::uint64_t {
  kSupport = 1,
  kPilots,
  kChannel,
  kPilotNoise,
  kSymbols,
  kDataNoise,
  kSpreading,
};

constexpr std::uint64_t kCodebookStream = std::numeric_limits<std::uint64_t>::max();

struct TrialData {
  Support truth;
  PilotDictionary pilots;
  ChannelMatrix channel;
  CMatrix received_pilot;
  SymbolIndices tx_symbols;
  CMatrix received_data;
  CMatrix codes;  // chips x K, empty when unspread
};

TrialData simulate(const ExperimentConfig& cfg, std::uint64_t trial_index,
                   const PilotDictionary* fixed_pilots) {
  Rng root = Rng::stream(cfg.seed, trial_index);
  Rng support_rng = root.split(kSupport);
  Rng pilot_rng = root.split(kPilots);
  Rng channel_rng = root.split(kChannel);
  Rng pilot_noise_rng = root.split(kPilotNoise);
  Rng symbol_rng = root.split(kSymbols);
  Rng data_noise_rng = root.split(kDataNoise);
  Rng spreading_rng = root.split(kSpreading);

  ActivityModel activity = cfg.activation_probability
                               ? ActivityModel{BernoulliActivity{*cfg.activation_probability}}
                               : ActivityModel{FixedActivity{cfg.active}};
  Support truth = draw_support(cfg.nodes, activity, support_rng);

  PilotDictionary pilots = fixed_pilots ? *fixed_pilots
                                        : gen_gaussian_dictionary(cfg.pilot_length, cfg.nodes, pilot_rng);

  ChannelMatrix channel = cfg.channel == ChannelModel::Gaussian
                              ? draw_channel_gaussian(cfg.antennas, truth, channel_rng)
                              : draw_channel_ula(cfg.antennas, truth, channel_rng, UlaOptions{cfg.paths, 0.5});

  const NoiseSpec noise{cfg.noise_variance()};
  CMatrix yp = received_pilot(channel.entries, pilots, noise, pilot_noise_rng);

  TrialData data{std::move(truth), std::move(pilots), std::move(channel), std::move(yp), {}, {}, {}};
  if (cfg.symbols > 0) {
    const ModulationScheme scheme = ModulationScheme::by_name(cfg.modulation);
    data.tx_symbols = random_symbols(data.truth.size(), cfg.symbols, scheme, symbol_rng);
    const CMatrix tx = modulate(data.tx_symbols, scheme);
    CMatrix effective = data.channel.active_columns();
    if (cfg.spreading > 0) {
      data.codes = spreading_codes(cfg.spreading, cfg.nodes, spreading_rng);
      effective = spread_channel(effective, select_columns(data.codes, data.truth));
    }
    data.received_data = received_data(effective, tx, noise, data_noise_rng);
  }
  return data;
}

Support run_detector(const std::string& name, const ExperimentConfig& cfg, const TrialData& data,
                     DetectorOutcome& out) {
  const double noise_var = cfg.noise_variance();
  const std::optional<int> known =
      cfg.known_sparsity ? std::optional<int>(data.truth.size()) : std::nullopt;

  if (name == "pai" || name == "paci") return data.truth;
  if (name == "cov-lasso") {
    LassoOptions opts = cfg.lasso;
    opts.known_sparsity = known;
    const DetectionResult r = detect_activity(data.received_pilot, data.pilots, noise_var, opts);
    out.lambda = r.lambda;
    return r.support_hat;
  }
  const MmvProblem problem = MmvProblem::from_received(data.received_pilot, data.pilots, noise_var);
  if (name == "msbl") {
    MsblOptions opts = cfg.msbl;
    opts.known_sparsity = known;
    return msbl(problem, opts).support;
  }
  if (name == "bomp") return bomp(problem, data.truth.size()).support;
  if (name == "mfocuss") {
    MfocussOptions opts = cfg.mfocuss;
    opts.known_sparsity = known;
    return mfocuss(problem, opts).support;
  }
  throw ConfigError("unknown detector '" + name + "'");
}

// LS channel estimation on the detected support, then decoding; fills ser and mse.
void run_link(const std::string& name, const ExperimentConfig& cfg, const TrialData& data,
              const Support& detected, DetectorOutcome& out) {
  const CMatrix true_active = data.channel.active_columns();
  const int d = data.truth.size();
  try {
    const CMatrix estimate = name == "paci"
                                 ? true_active
                                 : ls_channel_estimate(data.received_pilot,
                                                       select_columns(data.pilots.entries(), detected));
    CMatrix aligned = CMatrix::Zero(true_active.rows(), d);
    for (int i = 0; i < d; ++i) {
      const auto& idx = detected.indices();
      const auto it = std::lower_bound(idx.begin(), idx.end(), data.truth[static_cast<std::size_t>(i)]);
      if (it != idx.end() && *it == data.truth[static_cast<std::size_t>(i)])
        aligned.col(i) = estimate.col(it - idx.begin());
    }
    out.channel_mse = d > 0 ? channel_mse(true_active, aligned) : 0.0;

    if (cfg.symbols > 0) {
      const ModulationScheme scheme = ModulationScheme::by_name(cfg.modulation);
      CMatrix effective = estimate;
      if (cfg.spreading > 0) effective = spread_channel(estimate, select_columns(data.codes, detected));
      const CMatrix soft = ls_data_decode(data.received_data, effective);
      const SymbolIndices decided = demodulate(soft, scheme);
      out.ser = symbol_error_rate(data.tx_symbols, decided, data.truth, detected);
    }
  } catch (const SingularSystem& e) {
    // nothing decodable: every cell of the union grid is wrong
    out.error = e.what();
    out.channel_mse = d;
    out.ser = support_union(data.truth, detected).empty() ? 0.0 : 1.0;
  }
}

}  // namespace

PilotDictionary fixed_dictionary(const ExperimentConfig& cfg) {
  if (!cfg.pilot_file.empty()) {
    PilotDictionary s = read_dictionary_csv(std::filesystem::path(cfg.pilot_file));
    if (s.length() != cfg.pilot_length || s.nodes() != cfg.nodes)
      throw ConfigError("pilot file is " + std::to_string(s.length()) + "x" + std::to_string(s.nodes()) +
                        " but L=" + std::to_string(cfg.pilot_length) + ", K=" + std::to_string(cfg.nodes));
    return s;
  }
  Rng rng = Rng::stream(cfg.seed, kCodebookStream);
  return gen_gaussian_dictionary(cfg.pilot_length, cfg.nodes, rng);
}

TrialRecord run_trial(const ExperimentConfig& cfg, std::uint64_t trial_index,
                      const PilotDictionary* fixed_pilots) {
  std::optional<PilotDictionary> own;
  if (cfg.pilots == PilotMode::Fixed && fixed_pilots == nullptr) {
    own = fixed_dictionary(cfg);
    fixed_pilots = &*own;
  }
  if (cfg.pilots == PilotMode::PerTrial) fixed_pilots = nullptr;

  const TrialData data = simulate(cfg, trial_index, fixed_pilots);
  TrialRecord rec;
  rec.trial_index = trial_index;
  rec.true_active = data.truth.size();

  for (const auto& name : cfg.detectors) {
    DetectorOutcome out;
    out.detector = name;
    Support detected(cfg.nodes);
    const auto start = std::chrono::steady_clock::now();
    try {
      detected = run_detector(name, cfg, data, out);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      out.error = e.what();
    }
    out.runtime_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    out.success = out.error.empty() && detected == data.truth;
    if (out.error.empty()) {
      run_link(name, cfg, data, detected, out);
    } else {
      out.channel_mse = data.truth.size();
      out.ser = data.truth.empty() ? 0.0 : 1.0;
    }
    rec.outcomes.push_back(std::move(out));
  }
  return rec;
}

std::optional<theory::BoundReport> point_bound(const ExperimentConfig& cfg, const PilotDictionary& pilots) {
  if (cfg.pilots != PilotMode::Fixed || cfg.activation_probability || !cfg.lasso.lambda) return std::nullopt;
  if (pilots.nodes() < 2) return std::nullopt;
  theory::BoundInputs in;
  in.lambda = *cfg.lasso.lambda;
  in.mu = pilots.coherence();
  in.active = cfg.active;
  in.pilot_length = static_cast<int>(pilots.length());
  in.antennas = cfg.antennas;
  // unit-variance channels in both channel models
  in.sigma_max_1 = in.sigma_max_2 = 1.0;
  in.sigma_min2 = 1.0;
  in.sigma_w_max_1 = in.sigma_w_max_2 = std::sqrt(cfg.noise_variance());
  in.s_infnorm = pilots.max_abs_entry();
  return theory::evaluate_bound(in, cfg.bound_split);
}

std::vector<MetricsRow> run_point(const ExperimentConfig& cfg) {
  cfg.validate();
  std::optional<PilotDictionary> fixed;
  if (cfg.pilots == PilotMode::Fixed) fixed = fixed_dictionary(cfg);
  const PilotDictionary* fixed_ptr = fixed ? &*fixed : nullptr;

  std::vector<TrialRecord> records(static_cast<std::size_t>(cfg.trials));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= cfg.trials) return;
      try {
        records[static_cast<std::size_t>(i)] = run_trial(cfg, static_cast<std::uint64_t>(i), fixed_ptr);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = cfg.trials;
        return;
      }
    }
  };
  const int threads = std::min(cfg.workers, cfg.trials);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::optional<double> bound;
  if (fixed_ptr) {
    if (const auto rep = point_bound(cfg, *fixed_ptr); rep && rep->applicable) bound = rep->bound;
  }

  std::vector<MetricsRow> rows;
  for (std::size_t d = 0; d < cfg.detectors.size(); ++d) {
    MetricsRow row;
    row.detector = cfg.detectors[d];
    for (const auto& rec : records) {
      const auto& o = rec.outcomes[d];
      row.success_rate += o.success ? 1.0 : 0.0;
      row.ser += o.ser;
      row.channel_mse += o.channel_mse;
      row.runtime_ms += o.runtime_ms;
    }
    const double n = cfg.trials;
    row.success_rate /= n;
    row.ser /= n;
    row.channel_mse /= n;
    row.runtime_ms /= n;
    if (row.detector == "cov-lasso") row.bound = bound;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<MetricsRow> run_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.axis == SweepAxis::None) return run_point(cfg);

  std::vector<double> values = cfg.values;
  std::sort(values.begin(), values.end());
  std::vector<MetricsRow> rows;
  for (double v : values) {
    for (MetricsRow& row : run_point(cfg.at(v))) {
      row.axis_value = v;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace gfad
