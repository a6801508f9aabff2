#pragma once

#include <cstdint>

#include "tracekit/encoder.hpp"

namespace tracekit {

// One masked-position prediction task with its frozen random draws: the
// document with MASK substituted, the position being predicted, and the
// candidate list (true token first, then sampled distractors).
struct MaskedPrediction {
    std::vector<std::size_t> masked_ids;
    std::size_t position = 0;
    std::vector<std::size_t> candidates;
};

struct MaskedDocTask {
    std::vector<MaskedPrediction> predictions;
};

// Fresh mask draw for one document and epoch (dynamic masking). A fraction
// of positions (at least one, at most all but one) is replaced by MASK; each
// masked position gets `distractors` uniformly sampled candidate tokens.
MaskedDocTask make_masked_task(const Vocab& vocab, const std::vector<std::size_t>& ids,
                               double mask_fraction, std::size_t distractors,
                               Rng& rng);

// Softmax cross-entropy over cosine scores between the leave-one-out
// mean-pooled context encoding and the candidate embeddings, averaged over
// the masked positions. Accumulates dL/dparams into `grads` when non-null.
double masked_loss_and_grad(const EncoderParams& params, const MaskedDocTask& task,
                            EncoderGrads* grads);

struct PretrainConfig {
    double mask_fraction = 0.15;
    std::size_t epochs = 5;
    double learning_rate = 0.05;
    std::size_t distractors = 20;
    std::uint64_t seed = 3;
};

struct PretrainResult {
    std::vector<double> epoch_losses;
};

// Dynamic masked-token pretraining over the corpus; one SGD step per
// document. Documents shorter than 2 tokens are skipped. Deterministic
// under a fixed seed.
PretrainResult pretrain_masked(EncoderParams& params, const Corpus& corpus,
                               const PretrainConfig& config);

}  // namespace tracekit
