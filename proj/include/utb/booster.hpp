#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "utb/loss.hpp"
#include "utb/tree.hpp"

namespace utb {

enum class BoosterKind { tddp, causalgbm };
enum class EnsembleMode { boosting, bagging };

// A read-only matrix of raw feature rows for prediction.
struct MatrixView {
    const double* data = nullptr;
    int64_t n = 0;
    int p = 0;
    std::span<const double> row(int64_t i) const {
        return {data + i * p, static_cast<size_t>(p)};
    }
};

// A trained ensemble. Leaf weights are stored ready to use: boosting-mode
// trees carry shrinkage-applied weights and predictions sum over trees;
// bagging-mode trees carry raw weights and predictions average over trees.
struct BoosterModel {
    BoosterKind kind = BoosterKind::tddp;
    EnsembleMode mode = EnsembleMode::boosting;
    LossKind loss = LossKind::squared;
    int num_arms = 1;
    double shrinkage = 1.0;
    uint64_t seed = 0;
    int num_trees = 0;   // configured rounds
    int max_bins = 255;
    GrowthConfig growth;
    std::vector<std::string> feature_names;
    std::vector<UpliftTree> trees;

    int feature_count() const { return static_cast<int>(feature_names.size()); }
    // Throws Shape/Validation when the matrix width disagrees or the model is empty.
    void check_predictable(const MatrixView& rows) const;
};

const char* to_string(BoosterKind k);
const char* to_string(EnsembleMode m);
const char* to_string(LossKind l);
BoosterKind booster_kind_from(const std::string& name);
EnsembleMode ensemble_mode_from(const std::string& name);
LossKind loss_kind_from(const std::string& name);

}  // namespace utb
