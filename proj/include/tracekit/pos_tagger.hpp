#pragma once

#include <string>
#include <vector>

#include "tracekit/types.hpp"

namespace tracekit {

enum class PosTag {
    noun,
    verb,
    adjective,
    adverb,
    determiner,
    preposition,
    pronoun,
    conjunction,
    number,
};

struct TaggedToken {
    std::string token;
    PosTag tag = PosTag::noun;
};

// Rule/lexicon tagger: closed-class word lists, suffix heuristics, and a
// default-noun fallback. Input tokens are expected lowercase (preprocess
// output).
std::vector<TaggedToken> tag_tokens(const TokenList& tokens);

// Maximal contiguous (adjective* noun+) runs, returned as space-joined
// lowercase phrases in input order.
std::vector<std::string> chunk_noun_phrases(const TokenList& tokens);
std::vector<std::string> chunk_noun_phrases(const std::vector<TaggedToken>& tagged);

}  // namespace tracekit
