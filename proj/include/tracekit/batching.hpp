#pragma once

#include <cstdint>
#include <vector>

#include "tracekit/rng.hpp"
#include "tracekit/splits.hpp"

namespace tracekit {

// A labeled training pair for the classification objective (ids only;
// the trainer resolves texts against the dataset).
struct TrainingPair {
    std::string source_id;
    std::string target_id;
    double label = 0.0;
};

// All candidate pairs of the training partition with positives oversampled
// (with replacement) until the classes balance, then shuffled. Pairs whose
// label is unknown count as negatives: whatever is not in the visible answer
// set is treated as a non-link, exactly like the pairwise-mapping rule.
// Throws "no training links" when the partition has no positives.
std::vector<TrainingPair> make_balanced_pairs(const std::vector<LabeledPair>& train_pairs,
                                              std::uint64_t seed);

struct PairRef {
    std::string source_id;
    std::string target_id;
};

// One epoch of contrastive batches: each batch holds exactly `n` positive
// links sampled without replacement, never two links sharing a target (the
// other targets in a batch serve as that anchor's negatives). Links that
// cannot fill a complete collision-free batch are dropped for the epoch.
// Throws when `n` exceeds the number of positive links.
std::vector<std::vector<PairRef>> make_inbatch_negatives(
    const std::vector<PairRef>& positive_links, std::size_t n, Rng& rng);

// Self-supervised counterpart: batches of `n` distinct artifact ids; the
// anchor and positive views of an id come from two dropout passes.
std::vector<std::vector<std::string>> make_selfsup_batches(
    const std::vector<std::string>& artifact_ids, std::size_t n, Rng& rng);

}  // namespace tracekit
