#pragma once

#include <cstdint>

#include "tracekit/encoder.hpp"

namespace tracekit {

// Classification head: three affine layers with tanh between and a sigmoid
// output strictly inside (0, 1). Input is the concatenated pair encoding
// [enc(source); enc(target); |enc(source) - enc(target)|].
struct ClsHead {
    std::size_t input_dim = 0;
    std::size_t hidden = 0;
    Vec w1, b1;  // hidden x input
    Vec w2, b2;  // hidden x hidden
    Vec w3;      // 1 x hidden
    double b3 = 0.0;

    static ClsHead init(std::size_t input_dim, std::size_t hidden,
                        std::uint64_t seed);
};

struct ClsGrads {
    Vec w1, b1, w2, b2, w3;
    double b3 = 0.0;

    void init_like(const ClsHead& head);
    void clear();
    void axpy_into(ClsHead& head, double scale) const;
};

struct ClsTrace {
    Vec x;       // input
    Vec h1, h2;  // tanh activations
    double logit = 0.0;
    double p = 0.0;  // sigmoid(logit)
};

ClsTrace cls_forward(const ClsHead& head, Vec x);

// Backward from dL/dlogit; returns dL/dx through `dx`.
void cls_backward(const ClsHead& head, const ClsTrace& trace, double dlogit,
                  ClsGrads& grads, Vec& dx);

// Pair encoding and its backward split onto the two encodings.
Vec pair_encoding(const Vec& source, const Vec& target);
void pair_encoding_backward(const Vec& source, const Vec& target, const Vec& dx,
                            Vec& dsource, Vec& dtarget);

}  // namespace tracekit
