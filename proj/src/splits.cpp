#include "tracekit/splits.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "tracekit/rng.hpp"

namespace tracekit {

using ordered_json = nlohmann::ordered_json;
namespace fs = std::filesystem;

const char* to_string(TracingTask task) {
    switch (task) {
        case TracingTask::TLC: return "tlc";
        case TracingTask::TLX: return "tlx";
        case TracingTask::TLG: return "tlg";
    }
    return "tlc";
}

TracingTask tracing_task_from_string(const std::string& s) {
    if (s == "tlc") return TracingTask::TLC;
    if (s == "tlx") return TracingTask::TLX;
    if (s == "tlg") return TracingTask::TLG;
    throw std::runtime_error("unknown tracing task: " + s);
}

const PhaseView& TaskSplit::phase(const std::string& name) const {
    if (name == "train") return train;
    if (name == "valid") return valid;
    if (name == "test") return test;
    throw std::runtime_error("unknown phase: " + name);
}

PairSet TaskSplit::truth(const PhaseView& view) const {
    PairSet out;
    for (const auto& p : view.pairs) {
        if (p.label == LinkLabel::positive) out.insert({p.source_id, p.target_id});
    }
    return out;
}

PairSet TaskSplit::candidates(const PhaseView& view) const {
    PairSet out;
    for (const auto& p : view.pairs) out.insert({p.source_id, p.target_id});
    return out;
}

namespace {

void sort_pairs(std::vector<LabeledPair>& pairs) {
    std::sort(pairs.begin(), pairs.end(),
              [](const LabeledPair& a, const LabeledPair& b) {
                  if (a.source_id != b.source_id) return a.source_id < b.source_id;
                  return a.target_id < b.target_id;
              });
}

PairSet answer_set(const TraceDataset& dataset) {
    PairSet truth;
    for (const auto& l : dataset.links) {
        if (l.label == LinkLabel::positive) truth.insert({l.source_id, l.target_id});
    }
    return truth;
}

std::vector<std::string> all_ids(const std::vector<Artifact>& artifacts) {
    std::vector<std::string> ids;
    ids.reserve(artifacts.size());
    for (const auto& a : artifacts) ids.push_back(a.id);
    std::sort(ids.begin(), ids.end());
    return ids;
}

void check_assignment(const SplitOptions& opts) {
    if (opts.assignment[0] + opts.assignment[1] + opts.assignment[2] != opts.folds) {
        throw std::runtime_error("split: assignment does not sum to fold count");
    }
    if (opts.folds == 0) throw std::runtime_error("split: folds must be >= 1");
}

// fold index -> phase index (0 train, 1 valid, 2 test)
std::size_t phase_of_fold(std::size_t fold, const SplitOptions& opts) {
    if (fold < opts.assignment[0]) return 0;
    if (fold < opts.assignment[0] + opts.assignment[1]) return 1;
    return 2;
}

}  // namespace

TaskSplit split_by_link(const TraceDataset& dataset, std::uint64_t seed,
                        const SplitOptions& opts) {
    check_assignment(opts);
    const PairSet truth = answer_set(dataset);

    std::vector<PairKey> positives, negatives;
    for (const auto& s : dataset.sources) {
        for (const auto& t : dataset.targets) {
            PairKey key{s.id, t.id};
            (truth.count(key) ? positives : negatives).push_back(std::move(key));
        }
    }
    if (positives.size() + negatives.size() < opts.folds) {
        throw std::runtime_error("split_by_link: fewer candidate pairs than folds");
    }

    // Shuffle within each class, then deal positives first so both the
    // per-fold totals and the per-fold positive counts are balanced to +-1.
    Rng rng = make_rng(derive_seed(seed, 0));
    shuffle(positives, rng);
    shuffle(negatives, rng);

    TaskSplit split;
    split.task = TracingTask::TLC;
    split.seed = seed;

    std::array<std::vector<LabeledPair>*, 3> phases = {&split.train.pairs,
                                                       &split.valid.pairs,
                                                       &split.test.pairs};
    std::size_t position = 0;
    const auto deal = [&](const std::vector<PairKey>& pairs, LinkLabel label) {
        for (const auto& key : pairs) {
            const std::size_t fold = position % opts.folds;
            ++position;
            split.fold_assignment[key] = fold;
            phases[phase_of_fold(fold, opts)]->push_back(
                LabeledPair{key.first, key.second, label});
        }
    };
    deal(positives, LinkLabel::positive);
    deal(negatives, LinkLabel::negative);

    const auto sources = all_ids(dataset.sources);
    const auto targets = all_ids(dataset.targets);
    for (PhaseView* view : {&split.train, &split.valid, &split.test}) {
        sort_pairs(view->pairs);
        view->visible_sources = sources;
        view->visible_targets = targets;
    }
    return split;
}

TaskSplit split_by_artifact(const TraceDataset& dataset, std::uint64_t seed,
                            const SplitOptions& opts) {
    check_assignment(opts);
    const PairSet truth = answer_set(dataset);

    std::vector<std::string> source_ids = all_ids(dataset.sources);
    PartitionMode mode = opts.mode;
    if (mode == PartitionMode::automatic) {
        if (source_ids.size() < opts.folds) {
            std::cerr << "split_by_artifact: only " << source_ids.size()
                      << " sources for " << opts.folds
                      << " folds; falling back to equal partitioning\n";
            mode = PartitionMode::equal;
        } else {
            mode = PartitionMode::tenfold;
        }
    }
    if (mode == PartitionMode::tenfold && source_ids.size() < opts.folds) {
        throw std::runtime_error("split_by_artifact: fewer sources than folds");
    }

    Rng rng = make_rng(derive_seed(seed, 1));
    shuffle(source_ids, rng);

    TaskSplit split;
    split.task = TracingTask::TLX;
    split.seed = seed;

    // source id -> phase index
    std::map<std::string, std::size_t> source_phase;
    std::map<std::string, std::size_t> source_fold;
    if (mode == PartitionMode::tenfold) {
        for (std::size_t i = 0; i < source_ids.size(); ++i) {
            const std::size_t fold = i % opts.folds;
            source_fold[source_ids[i]] = fold;
            source_phase[source_ids[i]] = phase_of_fold(fold, opts);
        }
    } else {
        // Near-equal thirds; the remainder goes to test, then valid.
        const std::size_t n = source_ids.size();
        const std::size_t base = n / 3;
        const std::size_t rem = n % 3;
        const std::size_t test_n = base + (rem >= 1 ? 1 : 0);
        const std::size_t valid_n = base + (rem >= 2 ? 1 : 0);
        const std::size_t train_n = n - valid_n - test_n;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t phase = i < train_n ? 0 : (i < train_n + valid_n ? 1 : 2);
            source_phase[source_ids[i]] = phase;
            source_fold[source_ids[i]] = phase;
        }
    }

    std::array<PhaseView*, 3> views = {&split.train, &split.valid, &split.test};
    const auto targets = all_ids(dataset.targets);
    for (const auto& s : dataset.sources) {
        const std::size_t phase = source_phase.at(s.id);
        views[phase]->visible_sources.push_back(s.id);
        for (const auto& t : dataset.targets) {
            PairKey key{s.id, t.id};
            const LinkLabel label =
                truth.count(key) ? LinkLabel::positive : LinkLabel::negative;
            views[phase]->pairs.push_back(LabeledPair{s.id, t.id, label});
            split.fold_assignment[key] = source_fold.at(s.id);
        }
    }
    for (PhaseView* view : views) {
        sort_pairs(view->pairs);
        std::sort(view->visible_sources.begin(), view->visible_sources.end());
        view->visible_targets = targets;
    }
    return split;
}

TaskSplit make_generation_split(const TraceDataset& dataset, std::size_t shots,
                                std::uint64_t seed, const SplitOptions& opts) {
    TaskSplit split = split_by_artifact(dataset, seed, opts);
    split.task = TracingTask::TLG;
    split.shots = shots;

    std::vector<std::size_t> positive_indices;
    for (std::size_t i = 0; i < split.train.pairs.size(); ++i) {
        if (split.train.pairs[i].label == LinkLabel::positive) {
            positive_indices.push_back(i);
        }
    }
    if (shots > positive_indices.size()) {
        throw std::runtime_error("make_generation_split: shots (" +
                                 std::to_string(shots) +
                                 ") exceeds available train positives (" +
                                 std::to_string(positive_indices.size()) + ")");
    }
    Rng rng = make_rng(derive_seed(seed, 2));
    shuffle(positive_indices, rng);
    positive_indices.resize(shots);
    std::sort(positive_indices.begin(), positive_indices.end());

    std::size_t next = 0;
    for (std::size_t i = 0; i < split.train.pairs.size(); ++i) {
        if (next < positive_indices.size() && positive_indices[next] == i) {
            ++next;  // retained few-shot example
        } else {
            split.train.pairs[i].label = LinkLabel::unknown;
        }
    }
    return split;
}

std::vector<TaskSplit> replicate_splits(const TraceDataset& dataset,
                                        TracingTask task, std::size_t runs,
                                        std::uint64_t base_seed, std::size_t shots,
                                        const SplitOptions& opts) {
    if (runs < 1) throw std::runtime_error("replicate_splits: runs must be >= 1");
    std::vector<TaskSplit> splits;
    splits.reserve(runs);
    for (std::size_t i = 0; i < runs; ++i) {
        const std::uint64_t seed = base_seed + i;
        switch (task) {
            case TracingTask::TLC:
                splits.push_back(split_by_link(dataset, seed, opts));
                break;
            case TracingTask::TLX:
                splits.push_back(split_by_artifact(dataset, seed, opts));
                break;
            case TracingTask::TLG:
                splits.push_back(make_generation_split(dataset, shots, seed, opts));
                break;
        }
    }
    return splits;
}

namespace {

int label_to_int(LinkLabel label) {
    switch (label) {
        case LinkLabel::positive: return 1;
        case LinkLabel::negative: return 0;
        case LinkLabel::unknown: return -1;
    }
    return -1;
}

LinkLabel label_from_int(int v) {
    switch (v) {
        case 1: return LinkLabel::positive;
        case 0: return LinkLabel::negative;
        case -1: return LinkLabel::unknown;
        default: throw std::runtime_error("pair label must be 1, 0 or -1");
    }
}

void save_pairs(const std::vector<LabeledPair>& pairs, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "source_id,target_id,label\n";
    for (const auto& p : pairs) {
        out << p.source_id << ',' << p.target_id << ',' << label_to_int(p.label)
            << '\n';
    }
}

std::vector<LabeledPair> load_pairs(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::vector<LabeledPair> pairs;
    std::string line;
    if (!std::getline(in, line)) return pairs;
    if (line.rfind("source_id,target_id,label", 0) != 0) {
        throw std::runtime_error(path + ": expected pair CSV header");
    }
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const std::size_t c1 = line.find(',');
        const std::size_t c2 = line.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected 3 fields");
        }
        LabeledPair p;
        p.source_id = line.substr(0, c1);
        p.target_id = line.substr(c1 + 1, c2 - c1 - 1);
        p.label = label_from_int(std::stoi(line.substr(c2 + 1)));
        pairs.push_back(std::move(p));
    }
    return pairs;
}

ordered_json phase_manifest(const PhaseView& view) {
    ordered_json obj;
    obj["visible_sources"] = view.visible_sources;
    obj["visible_targets"] = view.visible_targets;
    return obj;
}

void load_phase_manifest(const ordered_json& obj, PhaseView& view) {
    view.visible_sources = obj.at("visible_sources").get<std::vector<std::string>>();
    view.visible_targets = obj.at("visible_targets").get<std::vector<std::string>>();
}

}  // namespace

void save_split(const TaskSplit& split, const std::string& dir) {
    fs::create_directories(dir);
    save_pairs(split.train.pairs, (fs::path(dir) / "train.csv").string());
    save_pairs(split.valid.pairs, (fs::path(dir) / "valid.csv").string());
    save_pairs(split.test.pairs, (fs::path(dir) / "test.csv").string());

    ordered_json manifest;
    manifest["task"] = to_string(split.task);
    manifest["seed"] = split.seed;
    manifest["shots"] = split.shots;
    manifest["train"] = phase_manifest(split.train);
    manifest["valid"] = phase_manifest(split.valid);
    manifest["test"] = phase_manifest(split.test);
    ordered_json folds = ordered_json::array();
    for (const auto& [key, fold] : split.fold_assignment) {
        folds.push_back(ordered_json::array({key.first, key.second, fold}));
    }
    manifest["fold_assignment"] = folds;

    std::ofstream out(fs::path(dir) / "manifest.json");
    if (!out) throw std::runtime_error("cannot write manifest in " + dir);
    out << manifest.dump(2) << '\n';
}

TaskSplit load_split(const std::string& dir) {
    TaskSplit split;
    split.train.pairs = load_pairs((fs::path(dir) / "train.csv").string());
    split.valid.pairs = load_pairs((fs::path(dir) / "valid.csv").string());
    split.test.pairs = load_pairs((fs::path(dir) / "test.csv").string());

    std::ifstream in(fs::path(dir) / "manifest.json");
    if (!in) throw std::runtime_error("cannot read manifest in " + dir);
    ordered_json manifest = ordered_json::parse(in);
    split.task = tracing_task_from_string(manifest.at("task").get<std::string>());
    split.seed = manifest.at("seed").get<std::uint64_t>();
    split.shots = manifest.at("shots").get<std::size_t>();
    load_phase_manifest(manifest.at("train"), split.train);
    load_phase_manifest(manifest.at("valid"), split.valid);
    load_phase_manifest(manifest.at("test"), split.test);
    for (const auto& item : manifest.at("fold_assignment")) {
        split.fold_assignment[{item.at(0).get<std::string>(),
                               item.at(1).get<std::string>()}] =
            item.at(2).get<std::size_t>();
    }
    return split;
}

}  // namespace tracekit
