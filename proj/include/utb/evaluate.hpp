#pragma once
#include <string>
#include <variant>
#include <vector>

#include "utb/causalgbm.hpp"
#include "utb/dataset.hpp"
#include "utb/qini.hpp"
#include "utb/synthetic.hpp"
#include "utb/tddp.hpp"

namespace utb {

using AnyBoosterConfig = std::variant<TddpConfig, CausalConfig>;

BoosterModel fit_any(const UpliftDataset& data, const AnyBoosterConfig& cfg, int num_threads = 0);

// Uplift score used for ranking: the tddp prediction, or the arm-1 effect on
// margin scale for causalgbm.
std::vector<double> uplift_scores(const BoosterModel& model, const MatrixView& rows);

struct CrossValidationReport {
    std::vector<double> fold_coefficients;
    double mean = 0.0;
    double std_error = 0.0;  // sample sd of fold coefficients / sqrt(k)
    std::string warning;
};

// Trains on each fold's train split and reports the Qini coefficient of its
// test split. Binary treatment only.
CrossValidationReport cross_validate(const UpliftDataset& data, const AnyBoosterConfig& cfg,
                                     int k, uint64_t seed, int num_threads = 0);

struct AblationRow {
    std::string method;  // "tddp" | "causalgbm"
    std::string mode;    // "boosting" | "bagging"
    int features = 0;
    double train_qini = 0.0;
    double test_qini = 0.0;
};

struct AblationOptions {
    TddpConfig tddp;      // ensemble_mode is overridden per run
    CausalConfig causal;
    uint64_t seed = 0;    // drives the 50/50 train/test shuffle
    int num_threads = 0;
};

// For every synthetic spec (one per feature count): draw the dataset, split it
// 50/50, and train both boosters in boosting and bagging modes, recording
// train- and test-set Qini coefficients.
std::vector<AblationRow> ablate_ensembles(const std::vector<SyntheticSpec>& specs,
                                          const AblationOptions& opts);

}  // namespace utb
