#include "tracekit/cls_head.hpp"

#include <cmath>
#include <stdexcept>

namespace tracekit {

ClsHead ClsHead::init(std::size_t input_dim, std::size_t hidden, std::uint64_t seed) {
    ClsHead h;
    h.input_dim = input_dim;
    h.hidden = hidden;
    Rng rng = make_rng(derive_seed(seed, 202));
    const auto xavier = [&](Vec& v, std::size_t fan_in, std::size_t fan_out,
                            std::size_t count) {
        const double bound =
            std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        v.resize(count);
        for (double& x : v) x = uniform_real(rng, -bound, bound);
    };
    xavier(h.w1, input_dim, hidden, hidden * input_dim);
    h.b1.assign(hidden, 0.0);
    xavier(h.w2, hidden, hidden, hidden * hidden);
    h.b2.assign(hidden, 0.0);
    xavier(h.w3, hidden, 1, hidden);
    h.b3 = 0.0;
    return h;
}

void ClsGrads::init_like(const ClsHead& head) {
    w1.assign(head.w1.size(), 0.0);
    b1.assign(head.b1.size(), 0.0);
    w2.assign(head.w2.size(), 0.0);
    b2.assign(head.b2.size(), 0.0);
    w3.assign(head.w3.size(), 0.0);
    b3 = 0.0;
}

void ClsGrads::clear() {
    std::fill(w1.begin(), w1.end(), 0.0);
    std::fill(b1.begin(), b1.end(), 0.0);
    std::fill(w2.begin(), w2.end(), 0.0);
    std::fill(b2.begin(), b2.end(), 0.0);
    std::fill(w3.begin(), w3.end(), 0.0);
    b3 = 0.0;
}

void ClsGrads::axpy_into(ClsHead& head, double scale) const {
    for (std::size_t i = 0; i < w1.size(); ++i) head.w1[i] += scale * w1[i];
    for (std::size_t i = 0; i < b1.size(); ++i) head.b1[i] += scale * b1[i];
    for (std::size_t i = 0; i < w2.size(); ++i) head.w2[i] += scale * w2[i];
    for (std::size_t i = 0; i < b2.size(); ++i) head.b2[i] += scale * b2[i];
    for (std::size_t i = 0; i < w3.size(); ++i) head.w3[i] += scale * w3[i];
    head.b3 += scale * b3;
}

ClsTrace cls_forward(const ClsHead& head, Vec x) {
    if (x.size() != head.input_dim) {
        throw std::runtime_error("cls_forward: input dimension mismatch");
    }
    ClsTrace t;
    t.x = std::move(x);

    t.h1.resize(head.hidden);
    for (std::size_t r = 0; r < head.hidden; ++r) {
        double acc = head.b1[r];
        const double* row = head.w1.data() + r * head.input_dim;
        for (std::size_t c = 0; c < head.input_dim; ++c) acc += row[c] * t.x[c];
        t.h1[r] = std::tanh(acc);
    }
    t.h2.resize(head.hidden);
    for (std::size_t r = 0; r < head.hidden; ++r) {
        double acc = head.b2[r];
        const double* row = head.w2.data() + r * head.hidden;
        for (std::size_t c = 0; c < head.hidden; ++c) acc += row[c] * t.h1[c];
        t.h2[r] = std::tanh(acc);
    }
    double logit = head.b3;
    for (std::size_t c = 0; c < head.hidden; ++c) logit += head.w3[c] * t.h2[c];
    t.logit = logit;
    t.p = 1.0 / (1.0 + std::exp(-logit));
    return t;
}

void cls_backward(const ClsHead& head, const ClsTrace& trace, double dlogit,
                  ClsGrads& grads, Vec& dx) {
    Vec dh2(head.hidden);
    for (std::size_t c = 0; c < head.hidden; ++c) {
        grads.w3[c] += dlogit * trace.h2[c];
        dh2[c] = dlogit * head.w3[c];
    }
    grads.b3 += dlogit;

    Vec dh1(head.hidden, 0.0);
    for (std::size_t r = 0; r < head.hidden; ++r) {
        const double dpre = dh2[r] * (1.0 - trace.h2[r] * trace.h2[r]);
        grads.b2[r] += dpre;
        double* gw = grads.w2.data() + r * head.hidden;
        const double* row = head.w2.data() + r * head.hidden;
        for (std::size_t c = 0; c < head.hidden; ++c) {
            gw[c] += dpre * trace.h1[c];
            dh1[c] += row[c] * dpre;
        }
    }

    dx.assign(head.input_dim, 0.0);
    for (std::size_t r = 0; r < head.hidden; ++r) {
        const double dpre = dh1[r] * (1.0 - trace.h1[r] * trace.h1[r]);
        grads.b1[r] += dpre;
        double* gw = grads.w1.data() + r * head.input_dim;
        const double* row = head.w1.data() + r * head.input_dim;
        for (std::size_t c = 0; c < head.input_dim; ++c) {
            gw[c] += dpre * trace.x[c];
            dx[c] += row[c] * dpre;
        }
    }
}

Vec pair_encoding(const Vec& source, const Vec& target) {
    const std::size_t d = source.size();
    Vec x(3 * d);
    for (std::size_t i = 0; i < d; ++i) {
        x[i] = source[i];
        x[d + i] = target[i];
        x[2 * d + i] = std::abs(source[i] - target[i]);
    }
    return x;
}

void pair_encoding_backward(const Vec& source, const Vec& target, const Vec& dx,
                            Vec& dsource, Vec& dtarget) {
    const std::size_t d = source.size();
    dsource.assign(d, 0.0);
    dtarget.assign(d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
        const double diff = source[i] - target[i];
        const double sign = diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0);
        dsource[i] = dx[i] + sign * dx[2 * d + i];
        dtarget[i] = dx[d + i] - sign * dx[2 * d + i];
    }
}

}  // namespace tracekit
