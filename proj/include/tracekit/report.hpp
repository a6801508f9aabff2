#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tracekit/metrics.hpp"

namespace tracekit {

// Gathers (name, report) rows from every report.json found directly in
// `dir` or one level below (run output directories).
std::vector<std::pair<std::string, MetricsReport>> collect_reports(
    const std::string& dir);

// Markdown table with one row per experiment and F2/MAP (plus precision,
// recall and threshold) columns.
std::string make_report_table(
    const std::vector<std::pair<std::string, MetricsReport>>& rows);

}  // namespace tracekit
