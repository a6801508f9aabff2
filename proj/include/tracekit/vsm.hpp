#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "tracekit/types.hpp"

namespace tracekit {

// Sparse vector sorted by index.
using SparseVec = std::vector<std::pair<std::size_t, double>>;

struct VsmIndex {
    std::unordered_map<std::string, std::size_t> vocabulary;
    std::vector<double> idf;
    // Ordered by artifact id so iteration order is reproducible.
    std::map<std::string, SparseVec> document_vectors;
    std::size_t document_count = 0;

    const SparseVec& vector_for(const std::string& artifact_id) const;
};

// TF = raw count, IDF = ln((1+N)/(1+df)) + 1 (smoothed, never negative).
// Throws on an empty artifact set.
VsmIndex fit_vsm(const std::vector<const Artifact*>& artifacts);
VsmIndex fit_vsm(const TraceDataset& dataset);

double cosine(const SparseVec& u, const SparseVec& v);
double cosine(const std::vector<double>& u, const std::vector<double>& v);

}  // namespace tracekit
