#include "tracekit/encoder.hpp"

#include <cmath>
#include <stdexcept>

namespace tracekit {

std::size_t Vocab::add(const std::string& token) {
    const auto it = index.find(token);
    if (it != index.end()) return it->second;
    const std::size_t id = tokens.size();
    tokens.push_back(token);
    index.emplace(token, id);
    return id;
}

std::size_t Vocab::lookup(const std::string& token) const {
    const auto it = index.find(token);
    return it == index.end() ? kUnk : it->second;
}

Vocab Vocab::from_documents(const std::vector<const TokenList*>& documents) {
    Vocab vocab;
    for (const TokenList* doc : documents) {
        for (const auto& tok : *doc) vocab.add(tok);
    }
    return vocab;
}

Vocab Vocab::from_dataset(const TraceDataset& dataset) {
    std::vector<const TokenList*> docs;
    for (const auto& a : dataset.sources) docs.push_back(&a.tokens);
    for (const auto& a : dataset.targets) docs.push_back(&a.tokens);
    return from_documents(docs);
}

EncoderParams EncoderParams::init(Vocab vocab, std::size_t dim, double dropout_rate,
                                  std::uint64_t seed) {
    if (dim < 2) throw std::runtime_error("encoder dim must be >= 2");
    if (dropout_rate < 0.0 || dropout_rate >= 1.0) {
        throw std::runtime_error("dropout_rate must be in [0, 1)");
    }
    EncoderParams p;
    p.vocab = std::move(vocab);
    p.dim = dim;
    p.dropout_rate = dropout_rate;
    p.seed = seed;

    Rng rng = make_rng(derive_seed(seed, 101));
    p.embedding.resize(p.vocab.size() * dim);
    for (double& x : p.embedding) x = uniform_real(rng, -0.1, 0.1);

    const double bound = std::sqrt(6.0 / (2.0 * static_cast<double>(dim)));
    p.proj_weight.resize(dim * dim);
    for (double& x : p.proj_weight) x = uniform_real(rng, -bound, bound);
    p.proj_bias.assign(dim, 0.0);
    return p;
}

void EncoderGrads::init_like(const EncoderParams& params) {
    embedding.assign(params.embedding.size(), 0.0);
    proj_weight.assign(params.proj_weight.size(), 0.0);
    proj_bias.assign(params.proj_bias.size(), 0.0);
}

void EncoderGrads::clear() {
    std::fill(embedding.begin(), embedding.end(), 0.0);
    std::fill(proj_weight.begin(), proj_weight.end(), 0.0);
    std::fill(proj_bias.begin(), proj_bias.end(), 0.0);
}

void EncoderGrads::axpy_into(EncoderParams& params, double scale) const {
    for (std::size_t i = 0; i < embedding.size(); ++i) {
        params.embedding[i] += scale * embedding[i];
    }
    for (std::size_t i = 0; i < proj_weight.size(); ++i) {
        params.proj_weight[i] += scale * proj_weight[i];
    }
    for (std::size_t i = 0; i < proj_bias.size(); ++i) {
        params.proj_bias[i] += scale * proj_bias[i];
    }
}

EncodeTrace encode_forward(const EncoderParams& params, const TokenList& tokens,
                           bool training, Rng* rng) {
    if (tokens.empty()) throw std::runtime_error("encode: empty token list");
    const std::size_t d = params.dim;

    EncodeTrace trace;
    trace.ids.reserve(tokens.size());
    for (const auto& tok : tokens) trace.ids.push_back(params.vocab.lookup(tok));

    trace.pooled.assign(d, 0.0);
    for (const std::size_t id : trace.ids) {
        const double* row = params.embedding_row(id);
        for (std::size_t i = 0; i < d; ++i) trace.pooled[i] += row[i];
    }
    const double inv_n = 1.0 / static_cast<double>(trace.ids.size());
    for (double& x : trace.pooled) x *= inv_n;

    const Vec* input = &trace.pooled;
    if (training && params.dropout_rate > 0.0) {
        if (rng == nullptr) {
            throw std::runtime_error("encode: training dropout needs an rng");
        }
        trace.dropout_mask.resize(d);
        const double keep_scale = 1.0 / (1.0 - params.dropout_rate);
        for (std::size_t i = 0; i < d; ++i) {
            trace.dropout_mask[i] =
                uniform_real(*rng) < params.dropout_rate ? 0.0 : keep_scale;
        }
    }

    Vec dropped;
    if (!trace.dropout_mask.empty()) {
        dropped.resize(d);
        for (std::size_t i = 0; i < d; ++i) {
            dropped[i] = trace.pooled[i] * trace.dropout_mask[i];
        }
        input = &dropped;
    }

    trace.projected.assign(d, 0.0);
    for (std::size_t r = 0; r < d; ++r) {
        double acc = params.proj_bias[r];
        const double* wrow = params.proj_weight.data() + r * d;
        for (std::size_t c = 0; c < d; ++c) acc += wrow[c] * (*input)[c];
        trace.projected[r] = acc;
    }
    trace.out.resize(d);
    for (std::size_t i = 0; i < d; ++i) trace.out[i] = std::tanh(trace.projected[i]);
    return trace;
}

Vec encode(const EncoderParams& params, const TokenList& tokens, bool training,
           Rng* rng) {
    return encode_forward(params, tokens, training, rng).out;
}

void encode_backward(const EncoderParams& params, const EncodeTrace& trace,
                     const Vec& dout, EncoderGrads& grads) {
    const std::size_t d = params.dim;

    Vec dproj(d);
    for (std::size_t i = 0; i < d; ++i) {
        dproj[i] = dout[i] * (1.0 - trace.out[i] * trace.out[i]);
    }

    // Input that fed the projection (post-dropout when training).
    Vec input = trace.pooled;
    if (!trace.dropout_mask.empty()) {
        for (std::size_t i = 0; i < d; ++i) input[i] *= trace.dropout_mask[i];
    }

    Vec dinput(d, 0.0);
    for (std::size_t r = 0; r < d; ++r) {
        grads.proj_bias[r] += dproj[r];
        double* gw = grads.proj_weight.data() + r * d;
        const double* wrow = params.proj_weight.data() + r * d;
        for (std::size_t c = 0; c < d; ++c) {
            gw[c] += dproj[r] * input[c];
            dinput[c] += wrow[c] * dproj[r];
        }
    }

    if (!trace.dropout_mask.empty()) {
        for (std::size_t i = 0; i < d; ++i) dinput[i] *= trace.dropout_mask[i];
    }

    const double inv_n = 1.0 / static_cast<double>(trace.ids.size());
    for (const std::size_t id : trace.ids) {
        double* grow = grads.embedding.data() + id * d;
        for (std::size_t i = 0; i < d; ++i) grow[i] += dinput[i] * inv_n;
    }
}

}  // namespace tracekit
