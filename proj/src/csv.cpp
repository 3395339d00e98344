// SPDX-License-Identifier: Apache-2.0
#include "gfad/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace gfad {

namespace {

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::optional<double> optional_field(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return std::stod(s);
}

}  // namespace

void emit_csv(const std::vector<MetricsRow>& rows, std::ostream& out) {
  if (rows.empty()) throw InvalidParameter("emit_csv: no rows");
  out << kMetricsHeader << '\n';
  for (const auto& r : rows) {
    out << (r.axis_value ? fmt6(*r.axis_value) : "") << ',' << r.detector << ',' << fmt6(r.success_rate)
        << ',' << fmt6(r.ser) << ',' << fmt6(r.channel_mse) << ',' << fmt6(r.runtime_ms) << ','
        << (r.bound ? fmt6(*r.bound) : "") << '\n';
  }
}

void emit_csv(const std::vector<MetricsRow>& rows, const std::filesystem::path& path) {
  if (rows.empty()) throw InvalidParameter("emit_csv: no rows");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  emit_csv(rows, out);
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

std::vector<MetricsRow> parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kMetricsHeader)
    throw InvalidParameter("parse_csv: missing or unexpected header");
  std::vector<MetricsRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::string item;
    std::istringstream fields(line);
    while (std::getline(fields, item, ',')) f.push_back(item);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    if (f.size() != 7) throw InvalidParameter("parse_csv: expected 7 fields in '" + line + "'");
    MetricsRow r;
    r.axis_value = optional_field(f[0]);
    r.detector = f[1];
    r.success_rate = std::stod(f[2]);
    r.ser = std::stod(f[3]);
    r.channel_mse = std::stod(f[4]);
    r.runtime_ms = std::stod(f[5]);
    r.bound = optional_field(f[6]);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace gfad
