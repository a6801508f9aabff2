#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tracekit/metrics.hpp"
#include "tracekit/types.hpp"

namespace tracekit {

enum class TracingTask { TLC, TLX, TLG };

const char* to_string(TracingTask task);
TracingTask tracing_task_from_string(const std::string& s);

struct LabeledPair {
    std::string source_id;
    std::string target_id;
    LinkLabel label = LinkLabel::unknown;
};

struct PhaseView {
    std::vector<LabeledPair> pairs;  // sorted by (source_id, target_id)
    std::vector<std::string> visible_sources;
    std::vector<std::string> visible_targets;
};

// How sources are partitioned for TLX/TLG. `tenfold` deals sources into
// `folds` folds grouped by `assignment`; `equal` makes three near-equal
// partitions (the small-dataset rule); `automatic` picks tenfold unless the
// dataset has fewer sources than folds.
enum class PartitionMode { automatic, tenfold, equal };

struct TaskSplit {
    TracingTask task = TracingTask::TLC;
    PhaseView train, valid, test;
    std::size_t shots = 0;  // TLG only
    std::uint64_t seed = 0;
    std::map<PairKey, std::size_t> fold_assignment;

    const PhaseView& phase(const std::string& name) const;
    PairSet truth(const PhaseView& view) const;       // positive pairs
    PairSet candidates(const PhaseView& view) const;  // all pairs
};

struct SplitOptions {
    std::size_t folds = 10;
    std::array<std::size_t, 3> assignment = {8, 1, 1};  // train/valid/test folds
    PartitionMode mode = PartitionMode::automatic;
};

// TLC: the full pairwise candidate set is dealt round-robin into folds
// (positives first so per-partition positive counts stay balanced to +-1),
// then folds are grouped per `assignment`. All artifacts visible everywhere.
TaskSplit split_by_link(const TraceDataset& dataset, std::uint64_t seed,
                        const SplitOptions& opts = {});

// TLX: source artifacts are partitioned; targets stay visible everywhere.
// Candidate pairs of a phase are (phase sources) x (all targets).
TaskSplit split_by_artifact(const TraceDataset& dataset, std::uint64_t seed,
                            const SplitOptions& opts = {});

// TLG: split-by-artifact, then every train label is masked to unknown except
// exactly `shots` uniformly chosen positives.
TaskSplit make_generation_split(const TraceDataset& dataset, std::size_t shots,
                                std::uint64_t seed, const SplitOptions& opts = {});

// `runs` independent splits from seeds base_seed + 0 .. base_seed + runs-1.
std::vector<TaskSplit> replicate_splits(const TraceDataset& dataset,
                                        TracingTask task, std::size_t runs,
                                        std::uint64_t base_seed, std::size_t shots = 0,
                                        const SplitOptions& opts = {});

// Split directory: train/valid/test pair CSVs (label 1/0/-1) + manifest.json.
void save_split(const TaskSplit& split, const std::string& dir);
TaskSplit load_split(const std::string& dir);

}  // namespace tracekit
