#include "tracekit/vsm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tracekit {

const SparseVec& VsmIndex::vector_for(const std::string& artifact_id) const {
    const auto it = document_vectors.find(artifact_id);
    if (it == document_vectors.end()) {
        throw std::runtime_error("artifact missing from index: " + artifact_id);
    }
    return it->second;
}

VsmIndex fit_vsm(const std::vector<const Artifact*>& artifacts) {
    if (artifacts.empty()) {
        throw std::runtime_error("fit_vsm: empty artifact set");
    }
    VsmIndex index;
    index.document_count = artifacts.size();

    // Vocabulary in first-seen order; document frequency per token.
    std::vector<std::size_t> df;
    for (const Artifact* a : artifacts) {
        std::vector<std::size_t> seen;
        for (const auto& tok : a->tokens) {
            auto [it, inserted] = index.vocabulary.emplace(tok, index.vocabulary.size());
            if (inserted) df.push_back(0);
            seen.push_back(it->second);
        }
        std::sort(seen.begin(), seen.end());
        seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
        for (const std::size_t idx : seen) ++df[idx];
    }

    const double n = static_cast<double>(artifacts.size());
    index.idf.resize(df.size());
    for (std::size_t i = 0; i < df.size(); ++i) {
        index.idf[i] = std::log((1.0 + n) / (1.0 + static_cast<double>(df[i]))) + 1.0;
    }

    for (const Artifact* a : artifacts) {
        std::unordered_map<std::size_t, double> counts;
        for (const auto& tok : a->tokens) {
            counts[index.vocabulary.at(tok)] += 1.0;
        }
        SparseVec vec;
        vec.reserve(counts.size());
        for (const auto& [idx, count] : counts) {
            vec.emplace_back(idx, count * index.idf[idx]);
        }
        std::sort(vec.begin(), vec.end());
        index.document_vectors[a->id] = std::move(vec);
    }
    return index;
}

VsmIndex fit_vsm(const TraceDataset& dataset) {
    std::vector<const Artifact*> all;
    for (const auto& a : dataset.sources) all.push_back(&a);
    for (const auto& a : dataset.targets) all.push_back(&a);
    return fit_vsm(all);
}

double cosine(const SparseVec& u, const SparseVec& v) {
    double dot = 0.0, nu = 0.0, nv = 0.0;
    std::size_t i = 0, j = 0;
    while (i < u.size() && j < v.size()) {
        if (u[i].first == v[j].first) {
            dot += u[i].second * v[j].second;
            ++i;
            ++j;
        } else if (u[i].first < v[j].first) {
            ++i;
        } else {
            ++j;
        }
    }
    for (const auto& [idx, val] : u) nu += val * val;
    for (const auto& [idx, val] : v) nv += val * val;
    if (nu == 0.0 || nv == 0.0) return 0.0;  // degenerate vectors rank last
    return dot / (std::sqrt(nu) * std::sqrt(nv));
}

double cosine(const std::vector<double>& u, const std::vector<double>& v) {
    if (u.size() != v.size()) {
        throw std::runtime_error("cosine: dimension mismatch");
    }
    double dot = 0.0, nu = 0.0, nv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot += u[i] * v[i];
        nu += u[i] * u[i];
        nv += v[i] * v[i];
    }
    if (nu == 0.0 || nv == 0.0) return 0.0;
    return dot / (std::sqrt(nu) * std::sqrt(nv));
}

}  // namespace tracekit
