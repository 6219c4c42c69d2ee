#pragma once

#include <string>

#include "mellinstop/experiments.hpp"

namespace mellinstop {

/// RFC-4180 CSV: CRLF line endings, '.' decimal separator, 17 significant
/// digits for doubles.  Byte-deterministic for a given report.
std::string to_csv(const ExperimentReport& report);

/// Full spec + records + summary + version.
std::string to_json(const ExperimentReport& report);

/// Standalone vector chart: box plot for loss_boxplot, scatter + fitted line
/// for rate_slope and minimax_decay.  Other kinds are a validation error.
std::string to_svg(const ExperimentReport& report);

/// Writes <dir>/<experiment>.<format> and returns the path.
std::string emit_to_file(const ExperimentReport& report,
                         const std::string& format, const std::string& dir);

/// JSON round-trip of the experiment spec (config file schema).
std::string spec_to_json(const ExperimentSpec& spec);
ExperimentSpec spec_from_json(const std::string& text);

}  // namespace mellinstop
