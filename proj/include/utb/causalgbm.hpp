#pragma once
#include <cstdint>
#include <utility>
#include <vector>

#include "utb/booster.hpp"
#include "utb/dataset.hpp"

namespace utb {

// Second-order booster fitting potential outcomes and treatment effects at
// once: every leaf carries a baseline weight v (outcome under control) plus
// one effect weight u_a per treatment arm, and each round adds v + u_{w_i} to
// row i's margin. v solves the control-only quadratic, then each u_a solves
// its arm's quadratic given v.
struct CausalConfig {
    int num_trees = 100;
    double shrinkage = 0.1;       // in (0,1]
    LossKind loss = LossKind::squared;
    GrowthConfig growth;
    EnsembleMode ensemble_mode = EnsembleMode::boosting;
    int max_bins = 255;
    uint64_t seed = 0;

    void validate() const;
};

// Per-arm gradient aggregates of one node; index 0 is control.
struct CausalLeafStats {
    std::vector<double> count;  // size K+1
    std::vector<double> sum_g;
    std::vector<double> sum_h;

    int num_arms() const { return static_cast<int>(count.size()) - 1; }
    double count_all() const;
    double sum_g_all() const;
    double sum_h_all() const;
};

// Optimal (v, u_1..u_K): v = -G_0/(H_0+lambda), u_a = -(G_a + v*H_a)/(H_a+lambda).
// Throws Validation when any denominator is zero.
std::pair<double, std::vector<double>> leaf_weights(const CausalLeafStats& stats, double lambda);

// Second-order objective of the leaf evaluated at the weights above:
// G*v + 0.5*(H+lambda)*v^2 - sum_a (G_a + v*H_a)^2 / (2*(H_a+lambda)).
double leaf_loss(const CausalLeafStats& stats, double lambda);

// Loss reduction of a candidate split: leaf_loss(parent) - left - right.
double split_gain(const CausalLeafStats& parent, const CausalLeafStats& left,
                  const CausalLeafStats& right, double lambda);

// iter_loss, when given, receives the mean training loss at the initial margin
// followed by one entry per round.
BoosterModel fit_causalgbm(const UpliftDataset& data, const CausalConfig& cfg,
                           int num_threads = 0, std::vector<double>* iter_loss = nullptr);

enum class EffectScale { margin, probability };

// Row-major n x K matrix of estimated effects. Margin scale sums the stored
// u_a weights; probability scale reports sigmoid(f+u_a) - sigmoid(f) for
// logistic models and is identical to margin scale for squared loss.
std::vector<double> predict_effect(const BoosterModel& model, const MatrixView& rows,
                                   EffectScale scale = EffectScale::margin);

// Predicted outcome under the given arm (0 = control baseline).
std::vector<double> predict_outcome(const BoosterModel& model, const MatrixView& rows, int arm,
                                    EffectScale scale = EffectScale::margin);

}  // namespace utb
