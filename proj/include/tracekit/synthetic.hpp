#pragma once

#include <cstdint>

#include "tracekit/gh_miner.hpp"
#include "tracekit/types.hpp"

namespace tracekit {

// Planted-link corpus: artifacts draw from per-topic rare vocabularies plus
// shared filler; a source links to every target of its topic. Targets flip
// to a disjoint paraphrase vocabulary at `paraphrase_rate`, so lexical
// overlap finds only part of the links and the rest require learned word
// associations.
struct SyntheticConfig {
    std::size_t topics = 15;
    std::size_t sources = 30;
    std::size_t targets = 60;
    std::size_t words_per_topic = 6;  // per side (source-side + paraphrase-side)
    std::size_t filler_words = 40;
    std::size_t text_length = 14;
    double topic_word_rate = 0.55;
    double paraphrase_rate = 0.5;
    std::size_t adjacent_pairs = 60;
    std::uint64_t seed = 2027;
};

TraceDataset make_synthetic_dataset(const SyntheticConfig& config);

// Issue-commit pairs drawn from the same topic vocabularies (issues read
// like sources, commits like targets).
std::vector<AdjacentPair> make_synthetic_adjacent_pairs(const SyntheticConfig& config);

}  // namespace tracekit
