#pragma once

#include <cstdint>
#include <string>

#include "tracekit/batching.hpp"
#include "tracekit/cls_head.hpp"
#include "tracekit/encoder.hpp"
#include "tracekit/pretrain.hpp"
#include "tracekit/splits.hpp"

namespace tracekit {

enum class ModelMode { cls, rank };

const char* to_string(ModelMode mode);
ModelMode model_mode_from_string(const std::string& s);

struct ModelConfig {
    std::size_t dim = 16;
    std::size_t cls_hidden = 32;
    double dropout_rate = 0.1;
    std::uint64_t seed = 1;
};

// Encoder plus (for CLS) the classification head. RANK scores by cosine of
// the two encodings; CLS by the head's sigmoid output.
struct TraceModel {
    ModelMode mode = ModelMode::cls;
    EncoderParams encoder;
    ClsHead head;  // unused in rank mode
};

TraceModel init_model(ModelMode mode, Vocab vocab, const ModelConfig& config);

struct TrainConfig {
    double learning_rate = 0.05;
    std::size_t epochs = 30;
    std::size_t batch_size = 8;  // CLS minibatch size / RANK ranking-game size
    std::uint64_t seed = 1;
    ModelMode mode = ModelMode::cls;
    double mlm_weight = 0.1;     // RANK only; weight of the masked-token loss
    double temperature = 0.05;
    double mask_fraction = 0.15;
    std::size_t distractors = 20;
};

struct TrainResult {
    std::vector<double> epoch_losses;
};

// Fine-tunes the model on the split's training partition. CLS consumes
// balanced labeled pairs; RANK consumes contrastive ranking batches built
// from the positive train links (or, when the partition has no labeled
// links at all, dropout-view self-supervision over the visible artifacts),
// plus the weighted masked-token loss. Deterministic under a fixed seed;
// a non-finite loss raises an error naming the epoch.
TrainResult train(TraceModel& model, const TraceDataset& dataset,
                  const TaskSplit& split, const TrainConfig& config);

// Scores every candidate pair of the phase: CLS emits the sigmoid
// probability, RANK the encoding cosine. Sorted per source, deterministic
// tiebreak. Throws on ids missing from the dataset.
std::vector<Prediction> predict(const TraceModel& model, const TraceDataset& dataset,
                                const PhaseView& phase);

// A split whose train partition holds the full pairwise mapping of the
// dataset; used to run the identical training loop on adjacent-task pairs.
TaskSplit full_train_split(const TraceDataset& dataset);

// Checkpoints: JSON with a format-version header, vocabulary, dimensions and
// all parameter tensors. Reload is bit-exact.
void save_model(const TraceModel& model, const std::string& path);
TraceModel load_model(const std::string& path);

}  // namespace tracekit
