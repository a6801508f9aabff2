#pragma once

#include <cstddef>
#include <string>

#include "tracekit/types.hpp"

namespace tracekit {

struct PreprocessConfig {
    bool strip_code_blocks = true;   // fenced ``` ... ``` spans
    bool strip_stack_traces = true;  // "  at pkg.Cls.method(...)" / "Traceback" lines
};

// Lowercased tokens split on any non-alphanumeric run. Fenced markdown code
// blocks, stack-trace lines and non-ASCII codepoints are removed first.
// Empty input yields an empty list. Idempotent on its own joined output.
TokenList preprocess(const std::string& text, const PreprocessConfig& config = {});

// Raw text an artifact contributes to tracing: title first, one separator,
// then body. The separator is punctuation and never survives tokenization.
std::string artifact_text(const Artifact& artifact);

// Fills `tokens` for every artifact in the dataset.
void preprocess_dataset(TraceDataset& dataset, const PreprocessConfig& config = {});

// Returns a new dataset without artifacts shorter than `min_tokens`; links
// with a removed endpoint are removed as well. Input is unchanged.
TraceDataset filter_short_artifacts(const TraceDataset& dataset,
                                    std::size_t min_tokens = 10);

// Joins tokens with single spaces (inverse-ish of preprocess; used when a
// token list has to travel through a plain-text interface).
std::string join_tokens(const TokenList& tokens);

}  // namespace tracekit
