// Central finite-difference gradient checking shared by the unit and
// acceptance suites.
#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace gradcheck {

struct Result {
    double max_rel_error = 0.0;
    std::size_t checked = 0;
    std::string worst_param;
};

// loss(): re-evaluates the loss from current parameter values.
// params: named views into every parameter vector.
// grads: analytic gradients, same order/shape as params.
inline Result check(const std::function<double()>& loss,
                    const std::vector<std::pair<std::string, std::vector<double>*>>& params,
                    const std::vector<const std::vector<double>*>& grads,
                    double h = 1e-5) {
    Result result;
    for (std::size_t p = 0; p < params.size(); ++p) {
        std::vector<double>& values = *params[p].second;
        const std::vector<double>& grad = *grads[p];
        for (std::size_t i = 0; i < values.size(); ++i) {
            const double saved = values[i];
            values[i] = saved + h;
            const double up = loss();
            values[i] = saved - h;
            const double down = loss();
            values[i] = saved;
            const double fd = (up - down) / (2.0 * h);
            const double denom = std::max({1.0, std::abs(fd), std::abs(grad[i])});
            const double rel = std::abs(fd - grad[i]) / denom;
            if (rel > result.max_rel_error) {
                result.max_rel_error = rel;
                result.worst_param = params[p].first + "[" + std::to_string(i) + "]";
            }
            ++result.checked;
        }
    }
    return result;
}

}  // namespace gradcheck
