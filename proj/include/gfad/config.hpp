// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gfad/baselines.hpp"
#include "gfad/detect.hpp"

namespace gfad {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SweepAxis { None, Sparsity, Snr, Antennas };
enum class ChannelModel { Gaussian, Ula };
enum class PilotMode { PerTrial, Fixed };

/// Detector and genie-receiver names accepted in `detector=`.
inline const std::vector<std::string>& known_detectors() {
  static const std::vector<std::string> names{"cov-lasso", "msbl", "bomp", "mfocuss", "pai", "paci"};
  return names;
}

/// Every scenario parameter of a Monte Carlo experiment. Keys in config files
/// and CLI flags use the names listed in `config_keys()`.
struct ExperimentConfig {
  int nodes = 64;           // K
  int pilot_length = 20;    // L
  int antennas = 128;       // M
  int active = 10;          // D, fixed-size activity
  std::optional<double> activation_probability;  // Bernoulli activity when set
  double snr_db = 0.0;
  int trials = 200;
  std::uint64_t seed = 1;
  int workers = 1;

  std::vector<std::string> detectors{"cov-lasso", "msbl", "bomp", "mfocuss"};
  /// Hand the true number of active nodes to every detector (BOMP always gets it).
  bool known_sparsity = true;
  LassoOptions lasso;
  MsblOptions msbl;
  MfocussOptions mfocuss;

  std::string modulation = "qpsk";
  int symbols = 40;    // N data symbols per frame; 0 disables the data stage
  int spreading = 0;   // chips per data symbol; 0 = unspread

  ChannelModel channel = ChannelModel::Gaussian;
  int paths = 200;
  PilotMode pilots = PilotMode::PerTrial;
  std::string pilot_file;  // user-supplied dictionary (implies fixed pilots)

  SweepAxis axis = SweepAxis::None;
  std::vector<double> values;

  double bound_split = 0.5;

  void validate() const;
  /// Copy with the swept parameter set to `value`.
  ExperimentConfig at(double value) const;
  double noise_variance() const;
};

/// Names of all keys accepted by apply_setting.
const std::vector<std::string>& config_keys();

/// Set one `key=value` pair. Throws ConfigError on unknown keys or bad values.
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Flat `key=value` lines; '#' starts a comment.
void apply_config_stream(ExperimentConfig& cfg, std::istream& in);
void apply_config_file(ExperimentConfig& cfg, const std::filesystem::path& path);

/// Figure presets fig2 ... fig8.
ExperimentConfig preset(const std::string& name);
const std::vector<std::string>& preset_names();

/// "2,4,6" or "start:step:stop" (inclusive).
std::vector<double> parse_values(const std::string& text);
SweepAxis parse_axis(const std::string& text);
std::string axis_name(SweepAxis axis);

}  // namespace gfad
