#include "tracekit/synthetic.hpp"

#include "tracekit/preprocess.hpp"
#include "tracekit/rng.hpp"

namespace tracekit {

namespace {

std::string topic_word(std::size_t topic, bool paraphrase, std::size_t index) {
    return "feat" + std::to_string(topic) + (paraphrase ? "b" : "a") +
           std::to_string(index);
}

std::string filler_word(std::size_t index) { return "fill" + std::to_string(index); }

// Source-style text: topic words from the source side only.
std::string source_text(const SyntheticConfig& c, std::size_t topic, Rng& rng) {
    std::string text;
    for (std::size_t i = 0; i < c.text_length; ++i) {
        if (!text.empty()) text += ' ';
        if (uniform_real(rng) < c.topic_word_rate) {
            text += topic_word(topic, false, uniform_index(rng, c.words_per_topic));
        } else {
            text += filler_word(uniform_index(rng, c.filler_words));
        }
    }
    return text;
}

// Target-style text: either a paraphrase-only rendering (no lexical overlap
// with sources of the topic) or a mixed one.
std::string target_text(const SyntheticConfig& c, std::size_t topic, Rng& rng) {
    const bool paraphrase_only = uniform_real(rng) < c.paraphrase_rate;
    std::string text;
    for (std::size_t i = 0; i < c.text_length; ++i) {
        if (!text.empty()) text += ' ';
        if (uniform_real(rng) < c.topic_word_rate) {
            const bool use_paraphrase =
                paraphrase_only || uniform_real(rng) < 0.5;
            text += topic_word(topic, use_paraphrase,
                               uniform_index(rng, c.words_per_topic));
        } else {
            text += filler_word(uniform_index(rng, c.filler_words));
        }
    }
    return text;
}

}  // namespace

TraceDataset make_synthetic_dataset(const SyntheticConfig& config) {
    Rng rng = make_rng(derive_seed(config.seed, 1));
    TraceDataset d;
    d.name = "synthetic";

    std::vector<std::size_t> source_topic(config.sources);
    std::vector<std::size_t> target_topic(config.targets);
    for (std::size_t i = 0; i < config.sources; ++i) {
        Artifact a;
        a.id = "SRC-" + std::to_string(100 + i);
        a.kind = ArtifactKind::requirement;
        a.project_id = "synthetic";
        source_topic[i] = i % config.topics;
        a.body = source_text(config, source_topic[i], rng);
        d.sources.push_back(std::move(a));
    }
    for (std::size_t i = 0; i < config.targets; ++i) {
        Artifact a;
        a.id = "TGT-" + std::to_string(100 + i);
        a.kind = ArtifactKind::design;
        a.project_id = "synthetic";
        target_topic[i] = i % config.topics;
        a.body = target_text(config, target_topic[i], rng);
        d.targets.push_back(std::move(a));
    }
    for (std::size_t s = 0; s < config.sources; ++s) {
        for (std::size_t t = 0; t < config.targets; ++t) {
            if (source_topic[s] == target_topic[t]) {
                d.links.push_back({d.sources[s].id, d.targets[t].id,
                                   LinkLabel::positive, LinkOrigin::answer_set});
            }
        }
    }
    preprocess_dataset(d);
    return d;
}

std::vector<AdjacentPair> make_synthetic_adjacent_pairs(const SyntheticConfig& config) {
    Rng rng = make_rng(derive_seed(config.seed, 2));
    std::vector<AdjacentPair> pairs;
    pairs.reserve(config.adjacent_pairs);
    for (std::size_t i = 0; i < config.adjacent_pairs; ++i) {
        const std::size_t topic = i % config.topics;
        AdjacentPair pair;
        pair.issue_text = preprocess(source_text(config, topic, rng));
        pair.commit_text = preprocess(target_text(config, topic, rng));
        pairs.push_back(std::move(pair));
    }
    return pairs;
}

}  // namespace tracekit
