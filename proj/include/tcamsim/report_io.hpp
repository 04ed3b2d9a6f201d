#pragma once

// CSV and JSON emission of benchmark reports. Both formats carry the same columns:
// metric, technology, absolute_value, unit, ratio_vs_3t2n, paper_target, tolerance, pass.
// Absent optional fields are empty in CSV and null in JSON.

#include <iosfwd>
#include <string>
#include <string_view>

#include "tcamsim/bench.hpp"
#include "tcamsim/refresh.hpp"

namespace tcamsim {

std::string report_to_csv(const BenchReport& report);
std::string report_to_json(const BenchReport& report);

/// Dispatches on "csv" or "json"; ArgumentError otherwise.
std::string format_report(const BenchReport& report, std::string_view format);

/// Workload statistics as report rows (no targets attached).
BenchReport stats_to_report(const RefreshStats& stats, std::string_view technology, std::string_view policy);

}  // namespace tcamsim
