#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "tracekit/rng.hpp"
#include "tracekit/types.hpp"

namespace tracekit {

using Vec = std::vector<double>;

// Token vocabulary with reserved UNK and MASK slots.
struct Vocab {
    static constexpr std::size_t kUnk = 0;
    static constexpr std::size_t kMask = 1;

    std::vector<std::string> tokens{"<unk>", "<mask>"};
    std::unordered_map<std::string, std::size_t> index;

    std::size_t size() const { return tokens.size(); }
    std::size_t add(const std::string& token);
    std::size_t lookup(const std::string& token) const;  // kUnk when absent

    static Vocab from_documents(const std::vector<const TokenList*>& documents);
    static Vocab from_dataset(const TraceDataset& dataset);
};

// Trainable text encoder: token embeddings, mean pooling, affine projection
// with tanh. Dropout (inverted scaling) hits the pooled vector in training
// mode only.
struct EncoderParams {
    Vocab vocab;
    std::size_t dim = 16;
    Vec embedding;    // V x dim, row-major
    Vec proj_weight;  // dim x dim, row-major
    Vec proj_bias;    // dim
    double dropout_rate = 0.1;
    std::uint64_t seed = 0;

    static EncoderParams init(Vocab vocab, std::size_t dim, double dropout_rate,
                              std::uint64_t seed);

    double* embedding_row(std::size_t id) { return embedding.data() + id * dim; }
    const double* embedding_row(std::size_t id) const {
        return embedding.data() + id * dim;
    }
};

struct EncoderGrads {
    Vec embedding, proj_weight, proj_bias;

    void init_like(const EncoderParams& params);
    void clear();
    void axpy_into(EncoderParams& params, double scale) const;  // params += scale * g
};

// Forward cache for backprop.
struct EncodeTrace {
    std::vector<std::size_t> ids;
    Vec pooled;        // mean of token embeddings
    Vec dropout_mask;  // per-coordinate scale; empty when dropout off
    Vec projected;     // W * dropped + b
    Vec out;           // tanh(projected)
};

// Throws on empty token list. `rng` drives the dropout mask and must be
// non-null when training and dropout_rate > 0.
EncodeTrace encode_forward(const EncoderParams& params, const TokenList& tokens,
                           bool training, Rng* rng);

Vec encode(const EncoderParams& params, const TokenList& tokens,
           bool training = false, Rng* rng = nullptr);

// Accumulates dL/dparams into `grads` given dL/dout.
void encode_backward(const EncoderParams& params, const EncodeTrace& trace,
                     const Vec& dout, EncoderGrads& grads);

}  // namespace tracekit
