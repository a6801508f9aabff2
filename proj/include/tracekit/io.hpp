#pragma once

#include <string>

#include "tracekit/types.hpp"

namespace tracekit {

// Artifacts: JSONL, one object per line with keys
// {"id","kind","title","body","project_id"}. Malformed records and duplicate
// ids raise std::runtime_error naming the offending line.
std::vector<Artifact> load_artifacts(const std::string& path);
void save_artifacts(const std::vector<Artifact>& artifacts, const std::string& path);

// Links: CSV with header "source_id,target_id,label" (label in {1,0}), or
// JSONL objects with the same keys. Format chosen by file extension
// (.csv vs anything else = JSONL).
std::vector<TraceLink> load_links(const std::string& path);
void save_links(const std::vector<TraceLink>& links, const std::string& path);

// A dataset is two artifact files plus a link file. Endpoints are validated.
TraceDataset load_dataset(const std::string& sources_path,
                          const std::string& targets_path,
                          const std::string& links_path,
                          const std::string& name = "");
void save_dataset(const TraceDataset& dataset, const std::string& sources_path,
                  const std::string& targets_path, const std::string& links_path);

// Corpora: plain text, one document per line, UTF-8. Lines are preprocessed
// into token lists on load; empty documents are skipped.
Corpus load_corpus(const std::string& path, CorpusTag tag);
void save_corpus(const Corpus& corpus, const std::string& path);

// Predictions: JSONL {"source_id","target_id","score"}.
std::vector<Prediction> load_predictions(const std::string& path);
void save_predictions(const std::vector<Prediction>& preds, const std::string& path);

}  // namespace tracekit
