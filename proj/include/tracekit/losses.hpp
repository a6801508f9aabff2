#pragma once

#include <vector>

#include "tracekit/encoder.hpp"

namespace tracekit {

// Binary cross entropy with p clamped to [eps, 1-eps], eps = 1e-7.
double bce_loss(double p, double y);
double bce_grad_p(double p, double y);  // dL/dp under the same clamp

// One contrastive step: N anchors, N positives and either zero explicit
// negatives (in-batch form: other positives act as negatives) or exactly N
// of them. Per-anchor loss
//   -ln( e^{sim(h_i,h_i+)/tau} / sum_j (e^{sim(h_i,h_j+)/tau} + e^{sim(h_i,h_j-)/tau}) )
// with sim = cosine, averaged over anchors, max-subtracted before exp.
struct ContrastiveBatch {
    std::vector<Vec> anchors;
    std::vector<Vec> positives;
    std::vector<Vec> negatives;  // empty or size() == anchors.size()
    double temperature = 0.05;
};

struct ContrastiveGrads {
    std::vector<Vec> anchors, positives, negatives;
};

double contrastive_loss(const ContrastiveBatch& batch);

// Returns the loss and fills per-encoding gradients when `grads` is non-null.
double contrastive_loss_and_grad(const ContrastiveBatch& batch,
                                 ContrastiveGrads* grads);

// d cosine(u, v) / du accumulated into du with weight `scale`.
void cosine_backward(const Vec& u, const Vec& v, double scale, Vec& du, Vec& dv);

}  // namespace tracekit
