#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "tracekit/types.hpp"

namespace tracekit {

struct LdaConfig {
    std::size_t topics = 20;
    double alpha = 50.0 / 20.0;  // 50 / K
    double beta = 0.01;
    std::size_t gibbs_iterations = 500;
    std::uint64_t seed = 13;

    static LdaConfig with_topics(std::size_t k) {
        LdaConfig c;
        c.topics = k;
        c.alpha = 50.0 / static_cast<double>(k);
        return c;
    }
};

struct LdaModel {
    std::size_t topics = 0;
    std::unordered_map<std::string, std::size_t> vocabulary;
    std::vector<std::vector<double>> phi;              // K x V, rows sum to 1
    std::map<std::string, std::vector<double>> theta;  // per-document topic mix
    LdaConfig config;

    const std::vector<double>& vector_for(const std::string& artifact_id) const;
};

// Collapsed Gibbs sampling; phi/theta from the final counts with alpha/beta
// smoothing. Deterministic under a fixed seed. Throws on empty vocabulary
// or K < 2.
LdaModel fit_lda(const std::vector<const Artifact*>& artifacts, const LdaConfig& config);
LdaModel fit_lda(const TraceDataset& dataset, const LdaConfig& config);

}  // namespace tracekit
