#pragma once

#include <string>

#include "qnash/baselines.hpp"
#include "qnash/solvers.hpp"

namespace qnash {

/// {"pne": [[action, ...], ...], "count": ..., "backend": {...}, "model": {...}}
/// plus "timings_ms" when requested. Without timings the text depends only on
/// the inputs, so seeded runs reproduce it byte for byte.
std::string report_json(const SolveReport& report, bool include_timings);

/// Same profile encoding as the solve report.
std::string report_json(const BaselineReport& report, bool include_timings);

}  // namespace qnash
