#pragma once

#include <cstdint>
#include <string>

#include "tracekit/lda.hpp"
#include "tracekit/metrics.hpp"
#include "tracekit/splits.hpp"
#include "tracekit/trainer.hpp"

namespace tracekit {

enum class TransferStrategy { none, corpus_pretrain, project_adapt, adjacent_task };

const char* to_string(TransferStrategy s);
TransferStrategy transfer_strategy_from_string(const std::string& s);

struct RunConfig {
    // Dataset
    std::string sources_path;
    std::string targets_path;
    std::string links_path;
    std::string name = "experiment";
    std::size_t min_tokens = 10;

    // Task and splits
    TracingTask task = TracingTask::TLC;
    std::size_t shots = 0;
    std::size_t runs = 5;
    std::uint64_t seed = 1;
    SplitOptions split;

    // Model
    std::string model = "vsm";  // vsm | lsi | lda | cls | rank
    TransferStrategy strategy = TransferStrategy::none;
    ModelConfig model_config;
    TrainConfig train_config;
    std::size_t lsi_rank = 0;  // 0 = min(100, N-1)
    LdaConfig lda = LdaConfig::with_topics(20);

    // Transfer inputs
    std::string corpus_path;          // corpus_pretrain: mined corpus file
    std::string background_path;      // project_adapt: background corpus
    std::string fetcher_spec;         // project_adapt: local:DIR / fixture:DIR
    double idf_threshold = 0.0;       // 0 = ln(4) default
    double blacklist_fraction = 0.01;
    std::size_t max_queries = 50;
    std::string adjacent_pairs_path;  // adjacent_task

    PretrainConfig pretrain;

    std::string out_dir = "out";

    void validate() const;  // path existence and strategy-specific inputs
};

// Executes split -> (transfer) -> train -> predict -> evaluate for each of
// the `runs` seeds, writes every intermediate under out_dir (split dirs,
// prediction files, per-run and aggregate reports, manifest with the config
// hash), and returns the aggregate report. Rerunning with an identical
// config reproduces identical bytes.
MetricsReport run_experiment(const RunConfig& config);

// Stable FNV-1a hash of the effective config (the manifest field).
std::string config_hash(const RunConfig& config);

}  // namespace tracekit
