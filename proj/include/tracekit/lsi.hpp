#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tracekit/vsm.hpp"

namespace tracekit {

struct LsiIndex {
    std::size_t k = 0;
    std::vector<double> singular_values;          // non-increasing, >= 0
    std::vector<std::vector<double>> right_basis; // k vectors over the vocabulary
    std::map<std::string, std::vector<double>> document_vectors;  // k-dim

    const std::vector<double>& vector_for(const std::string& artifact_id) const;
};

struct LsiOptions {
    std::size_t max_iterations = 1000;
    double tolerance = 1e-13;
    std::uint64_t seed = 7;
};

// Truncated SVD of the tf-idf document-term matrix via seeded subspace
// iteration with a final Rayleigh-Ritz rotation. Document vectors are the
// top-k singular projections (rows of U_k * Sigma_k). Throws if the
// iteration has not converged after max_iterations.
LsiIndex fit_lsi(const VsmIndex& vsm, std::size_t k, const LsiOptions& opts = {});

// Default rank when unspecified: min(100, N - 1).
std::size_t default_lsi_rank(std::size_t document_count);

}  // namespace tracekit
