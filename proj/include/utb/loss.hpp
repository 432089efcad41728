#pragma once
#include <span>

namespace utb {

enum class LossKind { squared, logistic };

// Pointwise loss value. Squared: 0.5*(yhat-y)^2. Logistic: yhat is log-odds
// and the value is the negative Bernoulli log-likelihood.
double loss_value(LossKind kind, double y, double yhat);

// First and second derivatives in yhat. Squared: g = yhat - y, h = 1.
// Logistic: g = sigmoid(yhat) - y, h = p*(1-p) floored at 1e-16.
void grad_hess(LossKind kind, std::span<const double> y, std::span<const double> yhat,
               std::span<double> g, std::span<double> h);

double sigmoid(double z);

constexpr double kHessianFloor = 1e-16;

}  // namespace utb
