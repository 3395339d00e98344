// SPDX-License-Identifier: Apache-2.0
#include "gfad/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <sstream>

namespace gfad {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const char* first = v.data();
  const char* last = v.data() + v.size();
  if (!v.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last || !std::isfinite(out))
    throw ConfigError(key + ": '" + v + "' is not a number");
  return out;
}

long long to_integer(const std::string& key, const std::string& v) {
  long long out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError(key + ": '" + v + "' is not an integer");
  return out;
}

int to_int(const std::string& key, const std::string& v) {
  const long long x = to_integer(key, v);
  if (x < -2147483647LL || x > 2147483647LL) throw ConfigError(key + ": value out of range");
  return static_cast<int>(x);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw ConfigError(key + ": '" + v + "' is not a boolean");
}

std::optional<double> to_auto_or_double(const std::string& key, const std::string& v) {
  if (v == "auto") return std::nullopt;
  return to_double(key, v);
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table{
      {"K", [](auto& c, auto& k, auto& v) { c.nodes = to_int(k, v); }},
      {"L", [](auto& c, auto& k, auto& v) { c.pilot_length = to_int(k, v); }},
      {"M", [](auto& c, auto& k, auto& v) { c.antennas = to_int(k, v); }},
      {"D",
       [](auto& c, auto& k, auto& v) {
         c.active = to_int(k, v);
         c.activation_probability.reset();
       }},
      {"p_active", [](auto& c, auto& k, auto& v) { c.activation_probability = to_double(k, v); }},
      {"snr_db", [](auto& c, auto& k, auto& v) { c.snr_db = to_double(k, v); }},
      {"trials", [](auto& c, auto& k, auto& v) { c.trials = to_int(k, v); }},
      {"seed",
       [](auto& c, auto& k, auto& v) {
         const long long s = to_integer(k, v);
         if (s < 0) throw ConfigError("seed must be >= 0");
         c.seed = static_cast<std::uint64_t>(s);
       }},
      {"workers", [](auto& c, auto& k, auto& v) { c.workers = to_int(k, v); }},
      {"detector",
       [](auto& c, auto&, auto& v) {
         if (v == "all") {
           c.detectors = {"cov-lasso", "msbl", "bomp", "mfocuss"};
           return;
         }
         c.detectors = split(v, ',');
       }},
      {"known_sparsity", [](auto& c, auto& k, auto& v) { c.known_sparsity = to_bool(k, v); }},
      {"lambda", [](auto& c, auto& k, auto& v) { c.lasso.lambda = to_auto_or_double(k, v); }},
      {"lambda_scale", [](auto& c, auto& k, auto& v) { c.lasso.lambda_scale = to_double(k, v); }},
      {"tau",
       [](auto& c, auto& k, auto& v) {
         const double tau = to_double(k, v);
         c.lasso.threshold_ratio = tau;
         c.msbl.prune_tolerance = tau;
         c.mfocuss.prune_tolerance = tau;
       }},
      {"max_iterations", [](auto& c, auto& k, auto& v) { c.lasso.max_iterations = to_int(k, v); }},
      {"objective_tolerance",
       [](auto& c, auto& k, auto& v) { c.lasso.objective_tolerance = to_double(k, v); }},
      {"step_tolerance", [](auto& c, auto& k, auto& v) { c.lasso.step_tolerance = to_double(k, v); }},
      {"msbl_max_iterations", [](auto& c, auto& k, auto& v) { c.msbl.max_iterations = to_int(k, v); }},
      {"mfocuss_p", [](auto& c, auto& k, auto& v) { c.mfocuss.p = to_double(k, v); }},
      {"mfocuss_lambda", [](auto& c, auto& k, auto& v) { c.mfocuss.lambda = to_auto_or_double(k, v); }},
      {"mfocuss_max_iterations",
       [](auto& c, auto& k, auto& v) { c.mfocuss.max_iterations = to_int(k, v); }},
      {"modulation",
       [](auto& c, auto&, auto& v) {
         if (v != "bpsk" && v != "qpsk" && v != "16qam") throw ConfigError("unknown modulation '" + v + "'");
         c.modulation = v;
       }},
      {"N", [](auto& c, auto& k, auto& v) { c.symbols = to_int(k, v); }},
      {"spreading", [](auto& c, auto& k, auto& v) { c.spreading = to_int(k, v); }},
      {"channel",
       [](auto& c, auto&, auto& v) {
         if (v == "gaussian") c.channel = ChannelModel::Gaussian;
         else if (v == "ula") c.channel = ChannelModel::Ula;
         else throw ConfigError("unknown channel model '" + v + "'");
       }},
      {"paths", [](auto& c, auto& k, auto& v) { c.paths = to_int(k, v); }},
      {"pilots",
       [](auto& c, auto&, auto& v) {
         if (v == "per-trial") c.pilots = PilotMode::PerTrial;
         else if (v == "fixed") c.pilots = PilotMode::Fixed;
         else throw ConfigError("pilots must be 'per-trial' or 'fixed'");
       }},
      {"pilot_file",
       [](auto& c, auto&, auto& v) {
         c.pilot_file = v;
         if (!v.empty()) c.pilots = PilotMode::Fixed;
       }},
      {"axis", [](auto& c, auto&, auto& v) { c.axis = parse_axis(v); }},
      {"values", [](auto& c, auto&, auto& v) { c.values = parse_values(v); }},
      {"sweep",
       [](auto& c, auto&, auto& v) {
         const auto colon = v.find(':');
         if (v == "none") {
           c.axis = SweepAxis::None;
           c.values.clear();
           return;
         }
         if (colon == std::string::npos) throw ConfigError("sweep must look like 'axis:values'");
         c.axis = parse_axis(v.substr(0, colon));
         c.values = parse_values(v.substr(colon + 1));
       }},
      {"bound_split", [](auto& c, auto& k, auto& v) { c.bound_split = to_double(k, v); }},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, _] : setters()) k.push_back(name);
    return k;
  }();
  return keys;
}

void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  const auto it = setters().find(key);
  if (it == setters().end()) throw ConfigError("unknown key '" + key + "'");
  it->second(cfg, key, trim(value));
}

void apply_config_stream(ExperimentConfig& cfg, std::istream& in) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
    try {
      apply_setting(cfg, trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
}

void apply_config_file(ExperimentConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  apply_config_stream(cfg, in);
}

std::vector<double> parse_values(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw ConfigError("empty value list");
  std::vector<double> out;
  if (t.find(':') != std::string::npos) {
    const auto parts = split(t, ':');
    if (parts.size() != 3) throw ConfigError("range must be start:step:stop");
    const double start = to_double("values", parts[0]);
    const double step = to_double("values", parts[1]);
    const double stop = to_double("values", parts[2]);
    if (!(step > 0.0) || stop < start) throw ConfigError("range needs step > 0 and stop >= start");
    const long n = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
    if (n > 100000) throw ConfigError("range has too many points");
    for (long i = 0; i < n; ++i) out.push_back(start + static_cast<double>(i) * step);
  } else {
    for (const auto& item : split(t, ',')) out.push_back(to_double("values", item));
  }
  return out;
}

SweepAxis parse_axis(const std::string& text) {
  if (text == "none") return SweepAxis::None;
  if (text == "sparsity") return SweepAxis::Sparsity;
  if (text == "snr") return SweepAxis::Snr;
  if (text == "antennas") return SweepAxis::Antennas;
  throw ConfigError("unknown sweep axis '" + text + "'");
}

std::string axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::None: return "none";
    case SweepAxis::Sparsity: return "sparsity";
    case SweepAxis::Snr: return "snr";
    case SweepAxis::Antennas: return "antennas";
  }
  return "none";
}

void ExperimentConfig::validate() const {
  if (nodes < 1) throw ConfigError("K must be >= 1");
  if (pilot_length < 1) throw ConfigError("L must be >= 1");
  if (antennas < 1) throw ConfigError("M must be >= 1");
  if (activation_probability) {
    if (!(*activation_probability >= 0.0 && *activation_probability <= 1.0))
      throw ConfigError("p_active must lie in [0, 1]");
  } else if (active < 0 || active > nodes) {
    throw ConfigError("D must lie in [0, K]");
  }
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if (symbols < 0) throw ConfigError("N must be >= 0");
  if (spreading < 0) throw ConfigError("spreading must be >= 0");
  if (paths < 1) throw ConfigError("paths must be >= 1");
  if (detectors.empty()) throw ConfigError("no detector selected");
  for (const auto& d : detectors) {
    const auto& names = known_detectors();
    if (std::find(names.begin(), names.end(), d) == names.end())
      throw ConfigError("unknown detector '" + d + "'");
  }
  if (axis != SweepAxis::None && values.empty()) throw ConfigError("sweep values are empty");
  if (!(bound_split > 0.0 && bound_split < 1.0)) throw ConfigError("bound_split must lie in (0, 1)");
  try {
    lasso.validate();
  } catch (const InvalidParameter& e) {
    throw ConfigError(e.what());
  }
  if (!(mfocuss.p > 0.0 && mfocuss.p <= 1.0)) throw ConfigError("mfocuss_p must lie in (0, 1]");
  for (double v : values) {
    if (axis == SweepAxis::Sparsity && (v < 0 || v > nodes || v != std::floor(v)))
      throw ConfigError("sparsity values must be integers in [0, K]");
    if (axis == SweepAxis::Antennas && (v < 1 || v != std::floor(v)))
      throw ConfigError("antenna values must be positive integers");
  }
}

ExperimentConfig ExperimentConfig::at(double value) const {
  ExperimentConfig c = *this;
  switch (axis) {
    case SweepAxis::None: break;
    case SweepAxis::Sparsity:
      c.active = static_cast<int>(value);
      c.activation_probability.reset();
      break;
    case SweepAxis::Snr: c.snr_db = value; break;
    case SweepAxis::Antennas: c.antennas = static_cast<int>(value); break;
  }
  return c;
}

double ExperimentConfig::noise_variance() const { return 1.0 / db_to_linear(snr_db); }

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8"};
  return names;
}

ExperimentConfig preset(const std::string& name) {
  ExperimentConfig c;
  c.nodes = 64;
  c.pilot_length = 20;
  c.symbols = 40;
  const std::vector<double> sparsity{2, 4, 6, 8, 10, 12};
  const std::vector<double> snr = parse_values("-10:2:10");
  const std::vector<std::string> detection{"cov-lasso", "msbl", "bomp", "mfocuss"};

  if (name == "fig2") {
    c.antennas = 128;
    c.snr_db = 0.0;
    c.axis = SweepAxis::Sparsity;
    c.values = sparsity;
    c.detectors = detection;
  } else if (name == "fig3") {
    c.antennas = 128;
    c.active = 10;
    c.axis = SweepAxis::Snr;
    c.values = snr;
    c.detectors = detection;
  } else if (name == "fig4") {
    c.active = 10;
    c.snr_db = 0.0;
    c.axis = SweepAxis::Antennas;
    c.values = {16, 32, 64, 128, 256};
    c.detectors = detection;
  } else if (name == "fig5" || name == "fig8") {
    c.antennas = 500;
    c.active = 6;
    c.axis = SweepAxis::Snr;
    c.values = snr;
    c.detectors = name == "fig5" ? std::vector<std::string>{"paci", "pai", "cov-lasso", "msbl"}
                                 : std::vector<std::string>{"pai", "cov-lasso", "msbl"};
  } else if (name == "fig6" || name == "fig7") {
    c.antennas = 500;
    c.snr_db = 10.0;
    c.axis = SweepAxis::Sparsity;
    c.values = sparsity;
    c.detectors = name == "fig6" ? std::vector<std::string>{"paci", "pai", "cov-lasso", "msbl"}
                                 : std::vector<std::string>{"pai", "cov-lasso", "msbl"};
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  return c;
}

}  // namespace gfad
