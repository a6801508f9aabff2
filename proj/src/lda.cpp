#include "tracekit/lda.hpp"

#include <stdexcept>

#include "tracekit/rng.hpp"

namespace tracekit {

const std::vector<double>& LdaModel::vector_for(const std::string& artifact_id) const {
    const auto it = theta.find(artifact_id);
    if (it == theta.end()) {
        throw std::runtime_error("artifact missing from index: " + artifact_id);
    }
    return it->second;
}

LdaModel fit_lda(const std::vector<const Artifact*>& artifacts, const LdaConfig& config) {
    if (config.topics < 2) throw std::runtime_error("fit_lda: K must be >= 2");
    if (config.alpha <= 0.0 || config.beta <= 0.0) {
        throw std::runtime_error("fit_lda: alpha and beta must be positive");
    }

    LdaModel model;
    model.topics = config.topics;
    model.config = config;

    std::vector<std::vector<std::size_t>> docs;  // token index sequences
    std::vector<std::string> ids;
    for (const Artifact* a : artifacts) {
        std::vector<std::size_t> doc;
        for (const auto& tok : a->tokens) {
            auto [it, inserted] =
                model.vocabulary.emplace(tok, model.vocabulary.size());
            doc.push_back(it->second);
        }
        docs.push_back(std::move(doc));
        ids.push_back(a->id);
    }
    const std::size_t v = model.vocabulary.size();
    if (v == 0) throw std::runtime_error("fit_lda: empty vocabulary");
    const std::size_t k = config.topics;

    Rng rng = make_rng(config.seed);
    std::vector<std::vector<std::size_t>> assignment(docs.size());
    std::vector<std::vector<double>> doc_topic(docs.size(), std::vector<double>(k, 0.0));
    std::vector<std::vector<double>> topic_word(k, std::vector<double>(v, 0.0));
    std::vector<double> topic_total(k, 0.0);

    for (std::size_t d = 0; d < docs.size(); ++d) {
        assignment[d].resize(docs[d].size());
        for (std::size_t pos = 0; pos < docs[d].size(); ++pos) {
            const auto topic = static_cast<std::size_t>(uniform_index(rng, k));
            assignment[d][pos] = topic;
            doc_topic[d][topic] += 1.0;
            topic_word[topic][docs[d][pos]] += 1.0;
            topic_total[topic] += 1.0;
        }
    }

    const double vbeta = static_cast<double>(v) * config.beta;
    std::vector<double> weights(k);
    for (std::size_t sweep = 0; sweep < config.gibbs_iterations; ++sweep) {
        for (std::size_t d = 0; d < docs.size(); ++d) {
            for (std::size_t pos = 0; pos < docs[d].size(); ++pos) {
                const std::size_t w = docs[d][pos];
                const std::size_t old_topic = assignment[d][pos];
                doc_topic[d][old_topic] -= 1.0;
                topic_word[old_topic][w] -= 1.0;
                topic_total[old_topic] -= 1.0;

                double total = 0.0;
                for (std::size_t t = 0; t < k; ++t) {
                    const double p = (doc_topic[d][t] + config.alpha) *
                                     (topic_word[t][w] + config.beta) /
                                     (topic_total[t] + vbeta);
                    weights[t] = p;
                    total += p;
                }
                const double u = uniform_real(rng) * total;
                double acc = 0.0;
                std::size_t new_topic = k - 1;
                for (std::size_t t = 0; t < k; ++t) {
                    acc += weights[t];
                    if (u < acc) {
                        new_topic = t;
                        break;
                    }
                }
                assignment[d][pos] = new_topic;
                doc_topic[d][new_topic] += 1.0;
                topic_word[new_topic][w] += 1.0;
                topic_total[new_topic] += 1.0;
            }
        }
    }

    model.phi.assign(k, std::vector<double>(v, 0.0));
    for (std::size_t t = 0; t < k; ++t) {
        const double denom = topic_total[t] + vbeta;
        for (std::size_t w = 0; w < v; ++w) {
            model.phi[t][w] = (topic_word[t][w] + config.beta) / denom;
        }
    }
    const double kalpha = static_cast<double>(k) * config.alpha;
    for (std::size_t d = 0; d < docs.size(); ++d) {
        std::vector<double> row(k, 0.0);
        const double denom = static_cast<double>(docs[d].size()) + kalpha;
        for (std::size_t t = 0; t < k; ++t) {
            row[t] = (doc_topic[d][t] + config.alpha) / denom;
        }
        model.theta[ids[d]] = std::move(row);
    }
    return model;
}

LdaModel fit_lda(const TraceDataset& dataset, const LdaConfig& config) {
    std::vector<const Artifact*> all;
    for (const auto& a : dataset.sources) all.push_back(&a);
    for (const auto& a : dataset.targets) all.push_back(&a);
    return fit_lda(all, config);
}

}  // namespace tracekit
