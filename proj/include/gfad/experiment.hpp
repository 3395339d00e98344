// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gfad/config.hpp"
#include "gfad/pilots.hpp"
#include "gfad/theory.hpp"

namespace gfad {

/// Outcome of one detector (or genie receiver) on one trial.
struct DetectorOutcome {
  std::string detector;
  bool success = false;  ///< estimated support equals the true support
  double ser = 0.0;
  double channel_mse = 0.0;
  double runtime_ms = 0.0;
  double lambda = 0.0;   ///< cov-lasso only
  std::string error;     ///< non-empty when a solver or LS step failed
};

struct TrialRecord {
  std::uint64_t trial_index = 0;
  int true_active = 0;
  std::vector<DetectorOutcome> outcomes;  ///< in config.detectors order
};

struct MetricsRow {
  std::optional<double> axis_value;  ///< empty for axis=none
  std::string detector;
  double success_rate = 0.0;
  double ser = 0.0;
  double channel_mse = 0.0;
  double runtime_ms = 0.0;
  std::optional<double> bound;
};

/// Dictionary used by every trial when pilots are fixed: the configured file,
/// or a Gaussian draw from a stream reserved for the codebook.
PilotDictionary fixed_dictionary(const ExperimentConfig& cfg);

/// One pipeline pass for a fully specified (non-swept) configuration. Results
/// depend only on (cfg, trial_index). `fixed_pilots` is used in fixed-pilot mode.
TrialRecord run_trial(const ExperimentConfig& cfg, std::uint64_t trial_index,
                      const PilotDictionary* fixed_pilots = nullptr);

/// Runs cfg.trials trials on cfg.workers threads and averages per detector.
std::vector<MetricsRow> run_point(const ExperimentConfig& cfg);

/// One block of rows per axis value (ascending), detectors in config order.
std::vector<MetricsRow> run_sweep(const ExperimentConfig& cfg);

/// Recovery-probability bound for the covariance LASSO at a point, when its hypotheses can
/// be evaluated: fixed pilots, fixed D, explicit lambda.
std::optional<theory::BoundReport> point_bound(const ExperimentConfig& cfg,
                                               const PilotDictionary& pilots);

}  // namespace gfad
