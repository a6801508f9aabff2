#include "tracekit/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

#include <nlohmann/json.hpp>

#include "tracekit/domain_corpus.hpp"
#include "tracekit/gh_miner.hpp"
#include "tracekit/io.hpp"
#include "tracekit/lsi.hpp"
#include "tracekit/preprocess.hpp"
#include "tracekit/ranking.hpp"

namespace tracekit {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

const char* to_string(TransferStrategy s) {
    switch (s) {
        case TransferStrategy::none: return "none";
        case TransferStrategy::corpus_pretrain: return "corpus_pretrain";
        case TransferStrategy::project_adapt: return "project_adapt";
        case TransferStrategy::adjacent_task: return "adjacent_task";
    }
    return "none";
}

TransferStrategy transfer_strategy_from_string(const std::string& s) {
    if (s == "none") return TransferStrategy::none;
    if (s == "corpus_pretrain") return TransferStrategy::corpus_pretrain;
    if (s == "project_adapt") return TransferStrategy::project_adapt;
    if (s == "adjacent_task") return TransferStrategy::adjacent_task;
    throw std::runtime_error("unknown transfer strategy: " + s);
}

namespace {

void require_file(const std::string& path, const char* what) {
    if (path.empty()) {
        throw std::runtime_error(std::string("config: ") + what + " is required");
    }
    if (!fs::exists(path)) {
        throw std::runtime_error(std::string("config: ") + what +
                                 " does not exist: " + path);
    }
}

bool is_neural(const std::string& model) { return model == "cls" || model == "rank"; }

template <typename F>
auto stage(const char* name, F&& f) {
    try {
        return f();
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("stage ") + name + ": " + e.what());
    }
}

}  // namespace

void RunConfig::validate() const {
    require_file(sources_path, "sources");
    require_file(targets_path, "targets");
    require_file(links_path, "links");
    if (model != "vsm" && model != "lsi" && model != "lda" && !is_neural(model)) {
        throw std::runtime_error("config: unknown model " + model);
    }
    if (runs < 1) throw std::runtime_error("config: runs must be >= 1");
    if (strategy == TransferStrategy::corpus_pretrain) {
        require_file(corpus_path, "corpus (corpus_pretrain strategy)");
    }
    if (strategy == TransferStrategy::project_adapt) {
        require_file(background_path, "background (project_adapt strategy)");
        if (fetcher_spec.empty()) {
            throw std::runtime_error(
                "config: fetcher is required for project_adapt");
        }
    }
    if (strategy == TransferStrategy::adjacent_task) {
        require_file(adjacent_pairs_path, "adjacent-pairs (adjacent_task strategy)");
    }
    if (strategy != TransferStrategy::none && !is_neural(model)) {
        throw std::runtime_error(
            "config: transfer strategies apply to neural models only");
    }
    if (shots > 0 && task != TracingTask::TLG) {
        throw std::runtime_error("config: shots apply to the tlg task only");
    }
}

namespace {

ordered_json config_json(const RunConfig& c) {
    ordered_json j;
    j["name"] = c.name;
    j["sources"] = c.sources_path;
    j["targets"] = c.targets_path;
    j["links"] = c.links_path;
    j["min_tokens"] = c.min_tokens;
    j["task"] = to_string(c.task);
    j["shots"] = c.shots;
    j["runs"] = c.runs;
    j["seed"] = c.seed;
    j["folds"] = c.split.folds;
    j["assignment"] = {c.split.assignment[0], c.split.assignment[1],
                       c.split.assignment[2]};
    j["partition_mode"] = c.split.mode == PartitionMode::equal
                              ? "equal"
                              : (c.split.mode == PartitionMode::tenfold ? "tenfold"
                                                                        : "automatic");
    j["model"] = c.model;
    j["strategy"] = to_string(c.strategy);
    j["dim"] = c.model_config.dim;
    j["cls_hidden"] = c.model_config.cls_hidden;
    j["dropout_rate"] = c.model_config.dropout_rate;
    j["learning_rate"] = c.train_config.learning_rate;
    j["epochs"] = c.train_config.epochs;
    j["batch_size"] = c.train_config.batch_size;
    j["mlm_weight"] = c.train_config.mlm_weight;
    j["temperature"] = c.train_config.temperature;
    j["lsi_rank"] = c.lsi_rank;
    j["lda_topics"] = c.lda.topics;
    j["lda_alpha"] = c.lda.alpha;
    j["lda_beta"] = c.lda.beta;
    j["lda_iterations"] = c.lda.gibbs_iterations;
    j["corpus"] = c.corpus_path;
    j["background"] = c.background_path;
    j["fetcher"] = c.fetcher_spec;
    j["idf_threshold"] = c.idf_threshold;
    j["blacklist_fraction"] = c.blacklist_fraction;
    j["max_queries"] = c.max_queries;
    j["adjacent_pairs"] = c.adjacent_pairs_path;
    j["pretrain_mask_fraction"] = c.pretrain.mask_fraction;
    j["pretrain_epochs"] = c.pretrain.epochs;
    j["pretrain_learning_rate"] = c.pretrain.learning_rate;
    j["pretrain_distractors"] = c.pretrain.distractors;
    return j;
}

TaskSplit make_split(const RunConfig& config, const TraceDataset& dataset,
                     std::uint64_t seed) {
    switch (config.task) {
        case TracingTask::TLC: return split_by_link(dataset, seed, config.split);
        case TracingTask::TLX: return split_by_artifact(dataset, seed, config.split);
        case TracingTask::TLG:
            return make_generation_split(dataset, config.shots, seed, config.split);
    }
    throw std::runtime_error("unreachable task");
}

// Corpus documents as a dataset so RANK self-supervision can run on them.
TraceDataset corpus_to_dataset(const Corpus& corpus) {
    TraceDataset d;
    d.name = "corpus";
    for (std::size_t i = 0; i < corpus.documents.size(); ++i) {
        Artifact a;
        a.id = "doc_" + std::to_string(i);
        a.kind = ArtifactKind::generic;
        a.body = join_tokens(corpus.documents[i]);
        a.tokens = corpus.documents[i];
        (i % 2 == 0 ? d.sources : d.targets).push_back(std::move(a));
    }
    return d;
}

bool has_positive(const std::vector<LabeledPair>& pairs) {
    for (const auto& p : pairs) {
        if (p.label == LinkLabel::positive) return true;
    }
    return false;
}

struct TransferInputs {
    Corpus pretrain_corpus;                 // corpus_pretrain
    Corpus domain_corpus;                   // project_adapt
    std::vector<AdjacentPair> adjacent;     // adjacent_task
    TraceDataset adjacent_dataset;
};

TransferInputs prepare_transfer(const RunConfig& config, const TraceDataset& dataset,
                                const std::string& out_dir) {
    TransferInputs inputs;
    switch (config.strategy) {
        case TransferStrategy::none:
            break;
        case TransferStrategy::corpus_pretrain:
            inputs.pretrain_corpus =
                load_corpus(config.corpus_path, CorpusTag::git_mined);
            break;
        case TransferStrategy::project_adapt: {
            const Corpus background =
                load_corpus(config.background_path, CorpusTag::background);
            const Blacklist blacklist =
                build_blacklist(background, config.blacklist_fraction);
            const double threshold = config.idf_threshold > 0.0
                                         ? config.idf_threshold
                                         : default_idf_threshold();
            const ConceptList concepts =
                select_concepts(dataset, blacklist, threshold);
            const auto queries = build_queries(concepts, config.max_queries);
            auto fetcher = make_fetcher(config.fetcher_spec);
            inputs.domain_corpus = harvest_sentences(queries, *fetcher);
            save_corpus(inputs.domain_corpus,
                        (fs::path(out_dir) / "domain_corpus.txt").string());
            break;
        }
        case TransferStrategy::adjacent_task:
            inputs.adjacent = load_adjacent_pairs(config.adjacent_pairs_path);
            inputs.adjacent_dataset = adjacent_pairs_to_dataset(inputs.adjacent);
            break;
    }
    return inputs;
}

Vocab assemble_vocab(const TraceDataset& dataset, const TransferInputs& inputs) {
    Vocab vocab = Vocab::from_dataset(dataset);
    for (const auto& doc : inputs.pretrain_corpus.documents) {
        for (const auto& tok : doc) vocab.add(tok);
    }
    for (const auto& doc : inputs.domain_corpus.documents) {
        for (const auto& tok : doc) vocab.add(tok);
    }
    for (const auto& pair : inputs.adjacent) {
        for (const auto& tok : pair.issue_text) vocab.add(tok);
        for (const auto& tok : pair.commit_text) vocab.add(tok);
    }
    return vocab;
}

}  // namespace

std::string config_hash(const RunConfig& config) {
    const std::string text = config_json(config).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

MetricsReport run_experiment(const RunConfig& config) {
    config.validate();
    fs::create_directories(config.out_dir);

    TraceDataset dataset = stage("load", [&] {
        TraceDataset d = load_dataset(config.sources_path, config.targets_path,
                                      config.links_path, config.name);
        preprocess_dataset(d);
        return filter_short_artifacts(d, config.min_tokens);
    });

    const TransferInputs transfer = stage("transfer-inputs", [&] {
        return prepare_transfer(config, dataset, config.out_dir);
    });

    std::vector<MetricsReport> reports;
    for (std::size_t run = 0; run < config.runs; ++run) {
        const std::uint64_t run_seed = config.seed + run;
        const fs::path run_dir = fs::path(config.out_dir) /
                                 ("run_" + std::to_string(run));
        fs::create_directories(run_dir);

        const TaskSplit split = stage("split", [&] {
            TaskSplit s = make_split(config, dataset, run_seed);
            save_split(s, (run_dir / "split").string());
            return s;
        });

        std::vector<Prediction> valid_preds, test_preds;
        if (!is_neural(config.model)) {
            stage("fit-ir", [&] {
                if (config.model == "vsm") {
                    const VsmIndex index = fit_vsm(dataset);
                    valid_preds = rank_candidates(index, split.valid);
                    test_preds = rank_candidates(index, split.test);
                } else if (config.model == "lsi") {
                    const VsmIndex vsm = fit_vsm(dataset);
                    const std::size_t k =
                        config.lsi_rank > 0
                            ? config.lsi_rank
                            : default_lsi_rank(vsm.document_vectors.size());
                    LsiOptions opts;
                    opts.seed = run_seed;
                    const LsiIndex index = fit_lsi(vsm, k, opts);
                    valid_preds = rank_candidates(index, split.valid);
                    test_preds = rank_candidates(index, split.test);
                } else {
                    LdaConfig lda = config.lda;
                    lda.seed = run_seed;
                    const LdaModel model = fit_lda(dataset, lda);
                    valid_preds = rank_candidates(model, split.valid);
                    test_preds = rank_candidates(model, split.test);
                }
                return 0;
            });
        } else {
            const ModelMode mode = model_mode_from_string(config.model);
            TraceModel model = stage("init-model", [&] {
                ModelConfig mc = config.model_config;
                mc.seed = run_seed;
                return init_model(mode, assemble_vocab(dataset, transfer), mc);
            });

            TrainConfig tc = config.train_config;
            tc.mode = mode;
            tc.seed = run_seed;

            stage("transfer", [&] {
                switch (config.strategy) {
                    case TransferStrategy::none:
                        break;
                    case TransferStrategy::corpus_pretrain: {
                        PretrainConfig pc = config.pretrain;
                        pc.seed = run_seed;
                        pretrain_masked(model.encoder, transfer.pretrain_corpus, pc);
                        break;
                    }
                    case TransferStrategy::project_adapt: {
                        if (mode == ModelMode::cls) {
                            PretrainConfig pc = config.pretrain;
                            pc.seed = run_seed;
                            pretrain_masked(model.encoder, transfer.domain_corpus, pc);
                        } else {
                            const TraceDataset corpus_ds =
                                corpus_to_dataset(transfer.domain_corpus);
                            const TaskSplit corpus_split = full_train_split(corpus_ds);
                            train(model, corpus_ds, corpus_split, tc);
                        }
                        break;
                    }
                    case TransferStrategy::adjacent_task: {
                        const TaskSplit adj_split =
                            full_train_split(transfer.adjacent_dataset);
                        train(model, transfer.adjacent_dataset, adj_split, tc);
                        break;
                    }
                }
                return 0;
            });

            stage("train", [&] {
                const bool trainable =
                    mode == ModelMode::rank || has_positive(split.train.pairs);
                if (trainable) {
                    train(model, dataset, split, tc);
                } else {
                    std::cerr << "train: no labeled train links for cls; model "
                                 "left at its current parameters\n";
                }
                save_model(model, (run_dir / "model.json").string());
                return 0;
            });

            stage("predict", [&] {
                valid_preds = predict(model, dataset, split.valid);
                test_preds = predict(model, dataset, split.test);
                return 0;
            });
        }

        const MetricsReport report = stage("eval", [&] {
            save_predictions(valid_preds,
                             (run_dir / "predictions_valid.jsonl").string());
            save_predictions(test_preds,
                             (run_dir / "predictions_test.jsonl").string());
            const double threshold =
                select_threshold(valid_preds, split.truth(split.valid));
            MetricsReport r = evaluate(test_preds, split.truth(split.test),
                                       split.candidates(split.test), threshold);
            std::ofstream out(run_dir / "report.json");
            out << report_to_json(r);
            return r;
        });
        reports.push_back(report);
    }

    const MetricsReport aggregate = aggregate_runs(reports);
    {
        std::ofstream out(fs::path(config.out_dir) / "report.json");
        out << report_to_json(aggregate);
    }
    {
        ordered_json manifest;
        manifest["config_hash"] = config_hash(config);
        manifest["stage_versions"] = {{"tracekit", "0.1.0"}};
        ordered_json seeds = ordered_json::array();
        for (std::size_t run = 0; run < config.runs; ++run) {
            seeds.push_back(config.seed + run);
        }
        manifest["seeds"] = seeds;
        manifest["config"] = config_json(config);
        std::ofstream out(fs::path(config.out_dir) / "manifest.json");
        out << manifest.dump(2) << '\n';
    }
    return aggregate;
}

}  // namespace tracekit
