#include "tracekit/pretrain.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tracekit/losses.hpp"
#include "tracekit/vsm.hpp"

namespace tracekit {

MaskedDocTask make_masked_task(const Vocab& vocab, const std::vector<std::size_t>& ids,
                               double mask_fraction, std::size_t distractors,
                               Rng& rng) {
    MaskedDocTask task;
    const std::size_t n = ids.size();
    if (n < 2 || mask_fraction <= 0.0) return task;

    std::size_t mask_count = static_cast<std::size_t>(
        std::llround(mask_fraction * static_cast<double>(n)));
    mask_count = std::clamp<std::size_t>(mask_count, 1, n - 1);

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    shuffle(order, rng);
    order.resize(mask_count);
    std::sort(order.begin(), order.end());

    std::vector<std::size_t> masked_ids = ids;
    for (const std::size_t pos : order) masked_ids[pos] = Vocab::kMask;

    const std::size_t v = vocab.size();
    for (const std::size_t pos : order) {
        MaskedPrediction pred;
        pred.masked_ids = masked_ids;
        pred.position = pos;
        pred.candidates.push_back(ids[pos]);
        for (std::size_t k = 0; k < distractors; ++k) {
            std::size_t cand = ids[pos];
            for (int attempt = 0; attempt < 100 && cand == ids[pos]; ++attempt) {
                cand = v > 2 ? 2 + uniform_index(rng, v - 2) : uniform_index(rng, v);
            }
            pred.candidates.push_back(cand);
        }
        task.predictions.push_back(std::move(pred));
    }
    return task;
}

double masked_loss_and_grad(const EncoderParams& params, const MaskedDocTask& task,
                            EncoderGrads* grads) {
    if (task.predictions.empty()) return 0.0;
    const std::size_t d = params.dim;
    const double inv_preds = 1.0 / static_cast<double>(task.predictions.size());

    double total = 0.0;
    for (const auto& pred : task.predictions) {
        const std::size_t n = pred.masked_ids.size();
        const double inv_ctx = 1.0 / static_cast<double>(n - 1);

        // Leave-one-out mean pool over the masked document.
        Vec pooled(d, 0.0);
        for (std::size_t q = 0; q < n; ++q) {
            if (q == pred.position) continue;
            const double* row = params.embedding_row(pred.masked_ids[q]);
            for (std::size_t i = 0; i < d; ++i) pooled[i] += row[i];
        }
        for (double& x : pooled) x *= inv_ctx;

        Vec projected(d);
        for (std::size_t r = 0; r < d; ++r) {
            double acc = params.proj_bias[r];
            const double* wrow = params.proj_weight.data() + r * d;
            for (std::size_t c = 0; c < d; ++c) acc += wrow[c] * pooled[c];
            projected[r] = acc;
        }
        Vec ctx(d);
        for (std::size_t i = 0; i < d; ++i) ctx[i] = std::tanh(projected[i]);

        const std::size_t n_cand = pred.candidates.size();
        std::vector<Vec> cand_rows(n_cand, Vec(d));
        Vec scores(n_cand);
        for (std::size_t k = 0; k < n_cand; ++k) {
            const double* row = params.embedding_row(pred.candidates[k]);
            std::copy(row, row + d, cand_rows[k].begin());
            scores[k] = cosine(ctx, cand_rows[k]);
        }
        const double peak = *std::max_element(scores.begin(), scores.end());
        double z = 0.0;
        for (const double s : scores) z += std::exp(s - peak);
        total += -(scores[0] - peak - std::log(z));

        if (grads == nullptr) continue;

        Vec dctx(d, 0.0);
        for (std::size_t k = 0; k < n_cand; ++k) {
            const double w = std::exp(scores[k] - peak) / z;
            const double dscore = (w - (k == 0 ? 1.0 : 0.0)) * inv_preds;
            Vec dcand(d, 0.0);
            cosine_backward(ctx, cand_rows[k], dscore, dctx, dcand);
            double* grow = grads->embedding.data() + pred.candidates[k] * d;
            for (std::size_t i = 0; i < d; ++i) grow[i] += dcand[i];
        }

        Vec dpooled(d, 0.0);
        for (std::size_t r = 0; r < d; ++r) {
            const double dpre = dctx[r] * (1.0 - ctx[r] * ctx[r]);
            grads->proj_bias[r] += dpre;
            double* gw = grads->proj_weight.data() + r * d;
            const double* wrow = params.proj_weight.data() + r * d;
            for (std::size_t c = 0; c < d; ++c) {
                gw[c] += dpre * pooled[c];
                dpooled[c] += wrow[c] * dpre;
            }
        }
        for (std::size_t q = 0; q < n; ++q) {
            if (q == pred.position) continue;
            double* grow = grads->embedding.data() + pred.masked_ids[q] * d;
            for (std::size_t i = 0; i < d; ++i) grow[i] += dpooled[i] * inv_ctx;
        }
    }
    return total * inv_preds;
}

PretrainResult pretrain_masked(EncoderParams& params, const Corpus& corpus,
                               const PretrainConfig& config) {
    if (corpus.documents.empty()) {
        throw std::runtime_error("pretrain_masked: empty corpus");
    }
    PretrainResult result;
    EncoderGrads grads;
    grads.init_like(params);

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        Rng rng = make_rng(derive_seed(config.seed, 300 + epoch));
        double epoch_loss = 0.0;
        std::size_t counted = 0;
        for (const auto& doc : corpus.documents) {
            if (doc.size() < 2) continue;
            std::vector<std::size_t> ids;
            ids.reserve(doc.size());
            for (const auto& tok : doc) ids.push_back(params.vocab.lookup(tok));

            const MaskedDocTask task = make_masked_task(
                params.vocab, ids, config.mask_fraction, config.distractors, rng);
            if (task.predictions.empty()) continue;

            grads.clear();
            const double loss = masked_loss_and_grad(params, task, &grads);
            if (!std::isfinite(loss)) {
                throw std::runtime_error("pretrain_masked: loss diverged at epoch " +
                                         std::to_string(epoch));
            }
            grads.axpy_into(params, -config.learning_rate);
            epoch_loss += loss;
            ++counted;
        }
        result.epoch_losses.push_back(counted ? epoch_loss / double(counted) : 0.0);
    }
    return result;
}

}  // namespace tracekit
