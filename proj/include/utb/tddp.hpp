#pragma once
#include <cstdint>
#include <vector>

#include "utb/booster.hpp"
#include "utb/dataset.hpp"

namespace utb {

// Booster that fits uplift directly: each round grows a tree on the current
// transformed labels with the delta-delta-p split criterion, estimates each
// leaf's effect as the treated-minus-control mean, and subtracts the shrunk
// prediction from the treated labels before the next round. Binary treatment
// only. Bagging mode freezes the labels and fits every tree on an independent
// bootstrap resample instead; predictions then average without shrinkage.
struct TddpConfig {
    int num_trees = 100;
    double shrinkage = 0.1;       // in (0,1]
    GrowthConfig growth;
    EnsembleMode ensemble_mode = EnsembleMode::boosting;
    int max_bins = 255;
    uint64_t seed = 0;

    void validate() const;
};

// Aggregates of one node split by arm, over the current working labels.
struct TddpNodeStats {
    double n = 0.0;
    double n_treated = 0.0;
    double n_control = 0.0;
    double sum_y_treated = 0.0;
    double sum_y_control = 0.0;

    double treated_mean() const { return sum_y_treated / n_treated; }
    double control_mean() const { return sum_y_control / n_control; }
};

// (n_L * n_R / n) * [(mean_L1 - mean_L0) - (mean_R1 - mean_R0)]^2.
// Callers must ensure all four arm counts are positive.
double ddp_gain(const TddpNodeStats& left, const TddpNodeStats& right);

// shrinkage * (treated mean - control mean).
double tddp_leaf_weight(const TddpNodeStats& stats, double shrinkage);

// Subtracts the tree's stored (already shrunk) leaf weight from the working
// label of every treated row; control rows are untouched.
void transform_labels(std::vector<double>& working_y, const UpliftTree& tree,
                      const UpliftDataset& data);

// label_variance, when given, receives one entry per round: the variance of
// the working label vector after that round's transform.
BoosterModel fit_tddp(const UpliftDataset& data, const TddpConfig& cfg, int num_threads = 0,
                      std::vector<double>* label_variance = nullptr);

// Estimated effect per row: sum of tree outputs (boosting) or their mean (bagging).
std::vector<double> predict_tddp(const BoosterModel& model, const MatrixView& rows);

}  // namespace utb
