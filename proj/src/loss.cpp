#include "utb/loss.hpp"

#include <algorithm>
#include <cmath>

namespace utb {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double loss_value(LossKind kind, double y, double yhat) {
    if (kind == LossKind::squared) {
        const double d = yhat - y;
        return 0.5 * d * d;
    }
    // log(1 + e^yhat) - y*yhat, computed without overflow
    const double softplus = std::max(yhat, 0.0) + std::log1p(std::exp(-std::abs(yhat)));
    return softplus - y * yhat;
}

void grad_hess(LossKind kind, std::span<const double> y, std::span<const double> yhat,
               std::span<double> g, std::span<double> h) {
    const size_t n = y.size();
    if (kind == LossKind::squared) {
        for (size_t i = 0; i < n; ++i) {
            g[i] = yhat[i] - y[i];
            h[i] = 1.0;
        }
        return;
    }
    for (size_t i = 0; i < n; ++i) {
        const double p = sigmoid(yhat[i]);
        g[i] = p - y[i];
        h[i] = std::max(p * (1.0 - p), kHessianFloor);
    }
}

}  // namespace utb
