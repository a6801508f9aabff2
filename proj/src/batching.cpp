#include "tracekit/batching.hpp"

#include <deque>
#include <set>
#include <stdexcept>

namespace tracekit {

std::vector<TrainingPair> make_balanced_pairs(const std::vector<LabeledPair>& train_pairs,
                                              std::uint64_t seed) {
    std::vector<TrainingPair> positives, negatives;
    for (const auto& p : train_pairs) {
        if (p.label == LinkLabel::positive) {
            positives.push_back({p.source_id, p.target_id, 1.0});
        } else {
            negatives.push_back({p.source_id, p.target_id, 0.0});
        }
    }
    if (positives.empty()) throw std::runtime_error("no training links");
    if (negatives.empty()) {
        throw std::runtime_error("make_balanced_pairs: no negative pairs");
    }

    Rng rng = make_rng(derive_seed(seed, 11));
    std::vector<TrainingPair> out = positives;
    while (out.size() < negatives.size()) {
        out.push_back(positives[uniform_index(rng, positives.size())]);
    }
    out.insert(out.end(), negatives.begin(), negatives.end());
    shuffle(out, rng);
    return out;
}

std::vector<std::vector<PairRef>> make_inbatch_negatives(
    const std::vector<PairRef>& positive_links, std::size_t n, Rng& rng) {
    if (n == 0) throw std::runtime_error("make_inbatch_negatives: n must be >= 1");
    if (positive_links.size() < n) {
        throw std::runtime_error("make_inbatch_negatives: batch size " +
                                 std::to_string(n) + " exceeds " +
                                 std::to_string(positive_links.size()) +
                                 " positive links");
    }
    std::vector<PairRef> pool = positive_links;
    shuffle(pool, rng);

    std::vector<std::vector<PairRef>> batches;
    std::deque<PairRef> pending(pool.begin(), pool.end());
    std::vector<PairRef> batch;
    std::set<std::string> batch_targets;
    std::vector<PairRef> deferred;
    while (!pending.empty()) {
        PairRef link = pending.front();
        pending.pop_front();
        if (batch_targets.count(link.target_id)) {
            deferred.push_back(std::move(link));  // collides; retry next batch
        } else {
            batch_targets.insert(link.target_id);
            batch.push_back(std::move(link));
        }
        if (batch.size() == n) {
            batches.push_back(std::move(batch));
            batch.clear();
            batch_targets.clear();
            for (auto it = deferred.rbegin(); it != deferred.rend(); ++it) {
                pending.push_front(*it);
            }
            deferred.clear();
        }
    }
    return batches;  // trailing partial batch dropped
}

std::vector<std::vector<std::string>> make_selfsup_batches(
    const std::vector<std::string>& artifact_ids, std::size_t n, Rng& rng) {
    if (n == 0) throw std::runtime_error("make_selfsup_batches: n must be >= 1");
    if (artifact_ids.size() < n) {
        throw std::runtime_error("make_selfsup_batches: not enough artifacts");
    }
    std::vector<std::string> pool = artifact_ids;
    shuffle(pool, rng);
    std::vector<std::vector<std::string>> batches;
    for (std::size_t start = 0; start + n <= pool.size(); start += n) {
        batches.emplace_back(pool.begin() + start, pool.begin() + start + n);
    }
    return batches;
}

}  // namespace tracekit
