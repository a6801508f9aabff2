#include "tracekit/trainer.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "tracekit/losses.hpp"
#include "tracekit/vsm.hpp"

namespace tracekit {

using ordered_json = nlohmann::ordered_json;

const char* to_string(ModelMode mode) {
    return mode == ModelMode::cls ? "cls" : "rank";
}

ModelMode model_mode_from_string(const std::string& s) {
    if (s == "cls") return ModelMode::cls;
    if (s == "rank") return ModelMode::rank;
    throw std::runtime_error("unknown model mode: " + s);
}

TraceModel init_model(ModelMode mode, Vocab vocab, const ModelConfig& config) {
    TraceModel model;
    model.mode = mode;
    model.encoder = EncoderParams::init(std::move(vocab), config.dim,
                                        config.dropout_rate, config.seed);
    if (mode == ModelMode::cls) {
        model.head = ClsHead::init(3 * config.dim, config.cls_hidden, config.seed);
    }
    return model;
}

namespace {

using TextMap = std::unordered_map<std::string, const TokenList*>;

TextMap text_map(const TraceDataset& dataset) {
    TextMap map;
    for (const auto& a : dataset.sources) map.emplace(a.id, &a.tokens);
    for (const auto& a : dataset.targets) map.emplace(a.id, &a.tokens);
    return map;
}

const TokenList& tokens_of(const TextMap& map, const std::string& id) {
    const auto it = map.find(id);
    if (it == map.end()) {
        throw std::runtime_error("artifact id not in dataset: " + id);
    }
    if (it->second->empty()) {
        throw std::runtime_error("artifact has no tokens (not preprocessed?): " + id);
    }
    return *it->second;
}

std::vector<std::size_t> vocab_ids(const Vocab& vocab, const TokenList& tokens) {
    std::vector<std::size_t> ids;
    ids.reserve(tokens.size());
    for (const auto& tok : tokens) ids.push_back(vocab.lookup(tok));
    return ids;
}

void check_finite(double loss, std::size_t epoch) {
    if (!std::isfinite(loss)) {
        throw std::runtime_error("train: loss diverged at epoch " +
                                 std::to_string(epoch));
    }
}

TrainResult train_cls(TraceModel& model, const TextMap& texts,
                      const TaskSplit& split, const TrainConfig& config) {
    std::vector<TrainingPair> pairs =
        make_balanced_pairs(split.train.pairs, config.seed);

    EncoderGrads enc_grads;
    ClsGrads head_grads;
    enc_grads.init_like(model.encoder);
    head_grads.init_like(model.head);

    TrainResult result;
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        Rng rng = make_rng(derive_seed(config.seed, 500 + epoch));
        shuffle(pairs, rng);

        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < pairs.size();
             start += config.batch_size) {
            const std::size_t end = std::min(pairs.size(), start + config.batch_size);
            const double inv_batch = 1.0 / static_cast<double>(end - start);
            enc_grads.clear();
            head_grads.clear();

            double batch_loss = 0.0;
            for (std::size_t i = start; i < end; ++i) {
                const auto& pair = pairs[i];
                const EncodeTrace src = encode_forward(
                    model.encoder, tokens_of(texts, pair.source_id), false, nullptr);
                const EncodeTrace tgt = encode_forward(
                    model.encoder, tokens_of(texts, pair.target_id), false, nullptr);
                const ClsTrace trace =
                    cls_forward(model.head, pair_encoding(src.out, tgt.out));
                batch_loss += bce_loss(trace.p, pair.label);

                const double dlogit = (trace.p - pair.label) * inv_batch;
                Vec dx;
                cls_backward(model.head, trace, dlogit, head_grads, dx);
                Vec dsrc, dtgt;
                pair_encoding_backward(src.out, tgt.out, dx, dsrc, dtgt);
                encode_backward(model.encoder, src, dsrc, enc_grads);
                encode_backward(model.encoder, tgt, dtgt, enc_grads);
            }
            enc_grads.axpy_into(model.encoder, -config.learning_rate);
            head_grads.axpy_into(model.head, -config.learning_rate);
            epoch_loss += batch_loss;
        }
        const double mean_loss = epoch_loss / static_cast<double>(pairs.size());
        check_finite(mean_loss, epoch);
        result.epoch_losses.push_back(mean_loss);
    }
    return result;
}

// Adds the weighted masked-token loss over the batch documents and its
// gradient; returns the weighted loss contribution.
double add_mlm_loss(TraceModel& model, const std::vector<const TokenList*>& docs,
                    const TrainConfig& config, Rng& rng, EncoderGrads& grads) {
    if (config.mlm_weight <= 0.0) return 0.0;
    double loss = 0.0;
    EncoderGrads local;
    local.init_like(model.encoder);
    std::size_t counted = 0;
    for (const TokenList* doc : docs) {
        if (doc->size() < 2) continue;
        const MaskedDocTask task =
            make_masked_task(model.encoder.vocab, vocab_ids(model.encoder.vocab, *doc),
                             config.mask_fraction, config.distractors, rng);
        if (task.predictions.empty()) continue;
        loss += masked_loss_and_grad(model.encoder, task, &local);
        ++counted;
    }
    if (counted == 0) return 0.0;
    const double scale = config.mlm_weight / static_cast<double>(counted);
    for (std::size_t i = 0; i < local.embedding.size(); ++i) {
        grads.embedding[i] += scale * local.embedding[i];
    }
    for (std::size_t i = 0; i < local.proj_weight.size(); ++i) {
        grads.proj_weight[i] += scale * local.proj_weight[i];
    }
    for (std::size_t i = 0; i < local.proj_bias.size(); ++i) {
        grads.proj_bias[i] += scale * local.proj_bias[i];
    }
    return config.mlm_weight * loss / static_cast<double>(counted);
}

TrainResult train_rank(TraceModel& model, const TextMap& texts,
                       const TaskSplit& split, const TrainConfig& config) {
    std::vector<PairRef> positives;
    for (const auto& p : split.train.pairs) {
        if (p.label == LinkLabel::positive) {
            positives.push_back({p.source_id, p.target_id});
        }
    }

    // With no labeled links at all, fall back to dropout-view
    // self-supervision over the artifacts visible in training.
    const bool self_supervised = positives.empty();
    std::vector<std::string> visible_ids;
    if (self_supervised) {
        visible_ids = split.train.visible_sources;
        visible_ids.insert(visible_ids.end(), split.train.visible_targets.begin(),
                           split.train.visible_targets.end());
        if (visible_ids.size() < 2) {
            throw std::runtime_error("train: nothing to train on (rank mode)");
        }
        if (model.encoder.dropout_rate <= 0.0) {
            throw std::runtime_error(
                "train: self-supervised rank mode needs dropout_rate > 0");
        }
    }
    const std::size_t n =
        std::min<std::size_t>(config.batch_size,
                              self_supervised ? visible_ids.size() : positives.size());

    // Pool of candidate negative targets for the degenerate N=1 batches.
    std::vector<std::string> all_targets = split.train.visible_targets;

    EncoderGrads grads;
    grads.init_like(model.encoder);

    TrainResult result;
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        Rng rng = make_rng(derive_seed(config.seed, 700 + epoch));
        double epoch_loss = 0.0;
        std::size_t batch_count = 0;

        const auto run_batch = [&](const std::vector<PairRef>& links,
                                   bool views_of_same_text) {
            grads.clear();
            ContrastiveBatch batch;
            batch.temperature = config.temperature;
            std::vector<EncodeTrace> anchor_traces, positive_traces, negative_traces;
            std::vector<const TokenList*> docs;
            for (const auto& link : links) {
                const TokenList& src = tokens_of(texts, link.source_id);
                const TokenList& tgt = views_of_same_text
                                           ? src
                                           : tokens_of(texts, link.target_id);
                anchor_traces.push_back(
                    encode_forward(model.encoder, src, true, &rng));
                positive_traces.push_back(
                    encode_forward(model.encoder, tgt, true, &rng));
                batch.anchors.push_back(anchor_traces.back().out);
                batch.positives.push_back(positive_traces.back().out);
                docs.push_back(&src);
                if (!views_of_same_text) docs.push_back(&tgt);
            }
            if (links.size() == 1 && !all_targets.empty()) {
                // No in-batch negatives at N=1: draw one random other target.
                std::string negative_id;
                for (int attempt = 0; attempt < 100; ++attempt) {
                    const auto& cand =
                        all_targets[uniform_index(rng, all_targets.size())];
                    if (cand != links[0].target_id && cand != links[0].source_id) {
                        negative_id = cand;
                        break;
                    }
                }
                if (!negative_id.empty()) {
                    negative_traces.push_back(encode_forward(
                        model.encoder, tokens_of(texts, negative_id), true, &rng));
                    batch.negatives.push_back(negative_traces.back().out);
                }
            }

            ContrastiveGrads cgrads;
            double loss = contrastive_loss_and_grad(batch, &cgrads);
            for (std::size_t i = 0; i < anchor_traces.size(); ++i) {
                encode_backward(model.encoder, anchor_traces[i], cgrads.anchors[i],
                                grads);
                encode_backward(model.encoder, positive_traces[i],
                                cgrads.positives[i], grads);
            }
            for (std::size_t i = 0; i < negative_traces.size(); ++i) {
                encode_backward(model.encoder, negative_traces[i],
                                cgrads.negatives[i], grads);
            }
            loss += add_mlm_loss(model, docs, config, rng, grads);
            grads.axpy_into(model.encoder, -config.learning_rate);
            epoch_loss += loss;
            ++batch_count;
        };

        if (self_supervised) {
            for (const auto& ids : make_selfsup_batches(visible_ids, n, rng)) {
                std::vector<PairRef> links;
                for (const auto& id : ids) links.push_back({id, id});
                run_batch(links, true);
            }
        } else {
            for (const auto& links : make_inbatch_negatives(positives, n, rng)) {
                run_batch(links, false);
            }
        }
        const double mean_loss =
            batch_count ? epoch_loss / static_cast<double>(batch_count) : 0.0;
        check_finite(mean_loss, epoch);
        result.epoch_losses.push_back(mean_loss);
    }
    return result;
}

}  // namespace

TrainResult train(TraceModel& model, const TraceDataset& dataset,
                  const TaskSplit& split, const TrainConfig& config) {
    if (config.learning_rate < 0.0) {
        throw std::runtime_error("train: learning rate must be >= 0");
    }
    if (config.epochs < 1) throw std::runtime_error("train: epochs must be >= 1");
    const TextMap texts = text_map(dataset);
    if (config.mode != model.mode) {
        throw std::runtime_error("train: config mode does not match model mode");
    }
    return model.mode == ModelMode::cls ? train_cls(model, texts, split, config)
                                        : train_rank(model, texts, split, config);
}

std::vector<Prediction> predict(const TraceModel& model, const TraceDataset& dataset,
                                const PhaseView& phase) {
    const TextMap texts = text_map(dataset);
    std::unordered_map<std::string, Vec> cache;
    const auto encoding_of = [&](const std::string& id) -> const Vec& {
        auto it = cache.find(id);
        if (it == cache.end()) {
            it = cache.emplace(id, encode(model.encoder, tokens_of(texts, id)))
                     .first;
        }
        return it->second;
    };

    std::vector<Prediction> preds;
    preds.reserve(phase.pairs.size());
    for (const auto& pair : phase.pairs) {
        const Vec& src = encoding_of(pair.source_id);
        const Vec& tgt = encoding_of(pair.target_id);
        Prediction p;
        p.source_id = pair.source_id;
        p.target_id = pair.target_id;
        if (model.mode == ModelMode::cls) {
            p.score = cls_forward(model.head, pair_encoding(src, tgt)).p;
        } else {
            p.score = cosine(src, tgt);
        }
        preds.push_back(std::move(p));
    }
    sort_predictions(preds);
    return preds;
}

TaskSplit full_train_split(const TraceDataset& dataset) {
    SplitOptions opts;
    opts.folds = 1;
    opts.assignment = {1, 0, 0};
    return split_by_link(dataset, 0, opts);
}

namespace {

ordered_json vec_to_json(const Vec& v) { return ordered_json(v); }

Vec vec_from_json(const ordered_json& j) { return j.get<Vec>(); }

}  // namespace

void save_model(const TraceModel& model, const std::string& path) {
    ordered_json obj;
    obj["format_version"] = 1;
    obj["mode"] = to_string(model.mode);

    ordered_json enc;
    enc["dim"] = model.encoder.dim;
    enc["dropout_rate"] = model.encoder.dropout_rate;
    enc["seed"] = model.encoder.seed;
    enc["vocab"] = model.encoder.vocab.tokens;
    enc["embedding"] = vec_to_json(model.encoder.embedding);
    enc["proj_weight"] = vec_to_json(model.encoder.proj_weight);
    enc["proj_bias"] = vec_to_json(model.encoder.proj_bias);
    obj["encoder"] = std::move(enc);

    if (model.mode == ModelMode::cls) {
        ordered_json head;
        head["input_dim"] = model.head.input_dim;
        head["hidden"] = model.head.hidden;
        head["w1"] = vec_to_json(model.head.w1);
        head["b1"] = vec_to_json(model.head.b1);
        head["w2"] = vec_to_json(model.head.w2);
        head["b2"] = vec_to_json(model.head.b2);
        head["w3"] = vec_to_json(model.head.w3);
        head["b3"] = model.head.b3;
        obj["head"] = std::move(head);
    }

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << obj.dump() << '\n';
}

TraceModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    ordered_json obj = ordered_json::parse(in);
    if (obj.at("format_version").get<int>() != 1) {
        throw std::runtime_error("unsupported model format version in " + path);
    }

    TraceModel model;
    model.mode = model_mode_from_string(obj.at("mode").get<std::string>());
    const auto& enc = obj.at("encoder");
    model.encoder.dim = enc.at("dim").get<std::size_t>();
    model.encoder.dropout_rate = enc.at("dropout_rate").get<double>();
    model.encoder.seed = enc.at("seed").get<std::uint64_t>();
    model.encoder.vocab.tokens = enc.at("vocab").get<std::vector<std::string>>();
    model.encoder.vocab.index.clear();
    for (std::size_t i = 0; i < model.encoder.vocab.tokens.size(); ++i) {
        model.encoder.vocab.index.emplace(model.encoder.vocab.tokens[i], i);
    }
    model.encoder.embedding = vec_from_json(enc.at("embedding"));
    model.encoder.proj_weight = vec_from_json(enc.at("proj_weight"));
    model.encoder.proj_bias = vec_from_json(enc.at("proj_bias"));

    if (model.mode == ModelMode::cls) {
        const auto& head = obj.at("head");
        model.head.input_dim = head.at("input_dim").get<std::size_t>();
        model.head.hidden = head.at("hidden").get<std::size_t>();
        model.head.w1 = vec_from_json(head.at("w1"));
        model.head.b1 = vec_from_json(head.at("b1"));
        model.head.w2 = vec_from_json(head.at("w2"));
        model.head.b2 = vec_from_json(head.at("b2"));
        model.head.w3 = vec_from_json(head.at("w3"));
        model.head.b3 = head.at("b3").get<double>();
    }
    return model;
}

}  // namespace tracekit
