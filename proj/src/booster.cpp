#include "utb/booster.hpp"

#include "utb/error.hpp"

namespace utb {

void BoosterModel::check_predictable(const MatrixView& rows) const {
    if (trees.empty()) fail(ErrorKind::Validation, "model has no trees");
    if (rows.p != feature_count())
        fail(ErrorKind::Shape, "feature count mismatch: model expects " +
                                   std::to_string(feature_count()) + ", data has " +
                                   std::to_string(rows.p));
}

const char* to_string(BoosterKind k) { return k == BoosterKind::tddp ? "tddp" : "causalgbm"; }
const char* to_string(EnsembleMode m) { return m == EnsembleMode::boosting ? "boosting" : "bagging"; }
const char* to_string(LossKind l) { return l == LossKind::squared ? "squared" : "logistic"; }

BoosterKind booster_kind_from(const std::string& name) {
    if (name == "tddp") return BoosterKind::tddp;
    if (name == "causalgbm") return BoosterKind::causalgbm;
    fail(ErrorKind::Config, "unknown booster '" + name + "' (expected tddp or causalgbm)");
}

EnsembleMode ensemble_mode_from(const std::string& name) {
    if (name == "boosting") return EnsembleMode::boosting;
    if (name == "bagging") return EnsembleMode::bagging;
    fail(ErrorKind::Config, "unknown ensemble mode '" + name + "' (expected boosting or bagging)");
}

LossKind loss_kind_from(const std::string& name) {
    if (name == "squared") return LossKind::squared;
    if (name == "logistic") return LossKind::logistic;
    fail(ErrorKind::Config, "unknown loss '" + name + "' (expected squared or logistic)");
}

}  // namespace utb
