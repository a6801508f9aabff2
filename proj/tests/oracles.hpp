// Brute-force reference implementations used by the unit and acceptance
// suites. Deliberately written from the definitions, independent of the
// library code paths they check.
#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <vector>

namespace oracles {

inline double f2_reference(double precision, double recall) {
    // Weighted harmonic mean with beta = 2:
    // (1 + 4) / (4 / precision + 1 / recall), guarding the zero cases.
    if (precision <= 0.0 || recall <= 0.0) return 0.0;
    return 5.0 / (4.0 / precision + 1.0 / recall);
}

struct RankedItem {
    std::string target;
    bool is_true = false;
};

// AP by rescanning the prefix for every true item (O(n^2) on purpose).
inline double ap_reference(const std::vector<RankedItem>& ranked) {
    std::size_t total_true = 0;
    for (const auto& item : ranked) total_true += item.is_true ? 1 : 0;
    if (total_true == 0) return 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        if (!ranked[i].is_true) continue;
        std::size_t hits = 0;
        for (std::size_t j = 0; j <= i; ++j) hits += ranked[j].is_true ? 1 : 0;
        sum += static_cast<double>(hits) / static_cast<double>(i + 1);
    }
    return sum / static_cast<double>(total_true);
}

inline double mean_reference(const std::vector<double>& xs) {
    double sum = 0.0;
    for (const double x : xs) sum += x;
    return xs.empty() ? 0.0 : sum / static_cast<double>(xs.size());
}

}  // namespace oracles
