#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tracekit/types.hpp"

namespace tracekit {

using PairKey = std::pair<std::string, std::string>;  // (source_id, target_id)
using PairSet = std::set<PairKey>;

// Single-run metrics. precision/recall/f2 come from thresholded decisions,
// map from the full ranking (threshold-independent). In a single-run report
// f2 always equals f2(precision, recall); aggregate reports hold per-metric
// means instead (the per-run reports are kept in `per_seed`).
struct MetricsReport {
    double precision = 0.0;
    double recall = 0.0;
    double f2 = 0.0;
    double map = 0.0;
    double threshold = 0.0;
    std::map<std::string, double> per_query_ap;
    std::size_t zero_truth_sources = 0;  // excluded from MAP, counted here
    std::vector<MetricsReport> per_seed;
};

// Recall-weighted harmonic mean: 5pr / (4p + r); 0 when the denominator is 0.
double f2_score(double precision, double recall);

// AP for one source. `ranked` must already be sorted (descending score,
// lexicographic target tiebreak) and cover all candidate targets of the
// source. Throws if `truth` is empty (callers skip such sources).
double average_precision(const std::vector<Prediction>& ranked,
                         const std::set<std::string>& truth);

// Arithmetic mean over the evaluated sources; throws when `aps` is empty.
double mean_average_precision(const std::vector<double>& aps);

// Scans every distinct validation score as a candidate threshold (decision
// rule: score >= threshold) and returns the one maximizing validation F2;
// ties resolved toward the lowest threshold.
double select_threshold(const std::vector<Prediction>& valid_predictions,
                        const PairSet& valid_truth);

// Full-report evaluation. `candidates` is the expected candidate pair set;
// a prediction set that does not cover it exactly raises an error listing
// the missing pairs. `truth` holds the positive pairs among the candidates.
MetricsReport evaluate(const std::vector<Prediction>& predictions,
                       const PairSet& truth, const PairSet& candidates,
                       double threshold);

// Per-metric mean across runs; inputs preserved in `per_seed`.
MetricsReport aggregate_runs(const std::vector<MetricsReport>& reports);

std::string report_to_json(const MetricsReport& report);
MetricsReport report_from_json(const std::string& json_text);

}  // namespace tracekit
