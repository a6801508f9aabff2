#include "tracekit/losses.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tracekit/vsm.hpp"

namespace tracekit {

namespace {
constexpr double kEps = 1e-7;

double clamp_p(double p) { return std::clamp(p, kEps, 1.0 - kEps); }
}  // namespace

double bce_loss(double p, double y) {
    const double q = clamp_p(p);
    return -(y * std::log(q) + (1.0 - y) * std::log(1.0 - q));
}

double bce_grad_p(double p, double y) {
    if (p < kEps || p > 1.0 - kEps) return 0.0;  // clamped region is flat
    return -(y / p) + (1.0 - y) / (1.0 - p);
}

void cosine_backward(const Vec& u, const Vec& v, double scale, Vec& du, Vec& dv) {
    double dot = 0.0, nu = 0.0, nv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot += u[i] * v[i];
        nu += u[i] * u[i];
        nv += v[i] * v[i];
    }
    if (nu == 0.0 || nv == 0.0) return;  // cosine defined as 0, flat
    const double norm_u = std::sqrt(nu);
    const double norm_v = std::sqrt(nv);
    const double inv = 1.0 / (norm_u * norm_v);
    const double c = dot * inv;
    for (std::size_t i = 0; i < u.size(); ++i) {
        du[i] += scale * (v[i] * inv - c * u[i] / nu);
        dv[i] += scale * (u[i] * inv - c * v[i] / nv);
    }
}

namespace {

void check_batch(const ContrastiveBatch& batch) {
    if (batch.temperature <= 0.0) {
        throw std::runtime_error("contrastive: temperature must be positive");
    }
    const std::size_t n = batch.anchors.size();
    if (n == 0) throw std::runtime_error("contrastive: empty batch");
    if (batch.positives.size() != n) {
        throw std::runtime_error("contrastive: positives size mismatch");
    }
    if (!batch.negatives.empty() && batch.negatives.size() != n) {
        throw std::runtime_error("contrastive: negatives size mismatch");
    }
    const std::size_t d = batch.anchors[0].size();
    const auto check_dim = [d](const std::vector<Vec>& vs) {
        for (const auto& v : vs) {
            if (v.size() != d) {
                throw std::runtime_error("contrastive: encoding dim mismatch");
            }
        }
    };
    check_dim(batch.anchors);
    check_dim(batch.positives);
    check_dim(batch.negatives);
}

}  // namespace

double contrastive_loss(const ContrastiveBatch& batch) {
    return contrastive_loss_and_grad(batch, nullptr);
}

double contrastive_loss_and_grad(const ContrastiveBatch& batch,
                                 ContrastiveGrads* grads) {
    check_batch(batch);
    const std::size_t n = batch.anchors.size();
    const std::size_t m = batch.negatives.size();
    const double tau = batch.temperature;
    const double inv_n = 1.0 / static_cast<double>(n);

    if (grads != nullptr) {
        const std::size_t d = batch.anchors[0].size();
        grads->anchors.assign(n, Vec(d, 0.0));
        grads->positives.assign(n, Vec(d, 0.0));
        grads->negatives.assign(m, Vec(d, 0.0));
    }

    double total = 0.0;
    std::vector<double> t_pos(n), t_neg(m);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            t_pos[j] = cosine(batch.anchors[i], batch.positives[j]) / tau;
        }
        for (std::size_t j = 0; j < m; ++j) {
            t_neg[j] = cosine(batch.anchors[i], batch.negatives[j]) / tau;
        }
        double peak = t_pos[0];
        for (const double t : t_pos) peak = std::max(peak, t);
        for (const double t : t_neg) peak = std::max(peak, t);
        double z = 0.0;
        for (const double t : t_pos) z += std::exp(t - peak);
        for (const double t : t_neg) z += std::exp(t - peak);
        total += -(t_pos[i] - peak - std::log(z));

        if (grads != nullptr) {
            for (std::size_t j = 0; j < n; ++j) {
                const double w = std::exp(t_pos[j] - peak) / z;
                const double dsim = (w - (i == j ? 1.0 : 0.0)) / tau * inv_n;
                cosine_backward(batch.anchors[i], batch.positives[j], dsim,
                                grads->anchors[i], grads->positives[j]);
            }
            for (std::size_t j = 0; j < m; ++j) {
                const double w = std::exp(t_neg[j] - peak) / z;
                const double dsim = w / tau * inv_n;
                cosine_backward(batch.anchors[i], batch.negatives[j], dsim,
                                grads->anchors[i], grads->negatives[j]);
            }
        }
    }
    return total * inv_n;
}

}  // namespace tracekit
