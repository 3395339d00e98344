// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "gfad/experiment.hpp"

namespace gfad {

inline constexpr const char* kMetricsHeader = "axis,detector,success_rate,ser,channel_mse,runtime_ms,bound";

/// Header plus one line per row; numbers with 6 significant digits, empty
/// cells for a missing axis value or bound. Throws InvalidParameter on no rows.
void emit_csv(const std::vector<MetricsRow>& rows, std::ostream& out);
/// Same, to a file. Throws IoError naming the path when it cannot be written.
void emit_csv(const std::vector<MetricsRow>& rows, const std::filesystem::path& path);

std::vector<MetricsRow> parse_csv(std::istream& in);

}  // namespace gfad
