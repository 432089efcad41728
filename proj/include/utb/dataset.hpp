#pragma once
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace utb {

// Rows of (features, outcome, treatment arm). Arm 0 is control and arms are
// contiguous 0..K. Missing feature values are NaN. true_effect carries the
// per-arm ground-truth effect for synthetic data and is empty otherwise.
struct UpliftDataset {
    int64_t n = 0;
    int p = 0;
    int num_arms = 0;                    // K; treatment values are {0..K}
    std::vector<double> features;        // row-major, n * p
    std::vector<double> outcome;         // y, length n
    std::vector<int> treatment;          // w, length n
    std::vector<double> true_effect;     // row-major n * K, or empty
    std::vector<std::string> feature_names;

    std::span<const double> row(int64_t i) const { return {features.data() + i * p, static_cast<size_t>(p)}; }
    double at(int64_t i, int f) const { return features[i * p + f]; }
    bool has_true_effect() const { return !true_effect.empty(); }

    // Throws Validation if lengths disagree, arms are not contiguous {0..K}
    // with K >= 1, or any arm (including control) has no rows.
    void validate() const;

    UpliftDataset subset(std::span<const uint32_t> rows) const;
};

// Reads a UTF-8 comma-separated file with a header row. outcome_col and
// treatment_col name the label and arm columns; every other column becomes a
// feature in file order. Empty cells are missing (NaN). Treatment values are
// remapped to contiguous {0..K}; the literal value 0 must be present and stays
// the control arm.
UpliftDataset load_csv(const std::string& path, const std::string& outcome_col,
                       const std::string& treatment_col);

struct DatasetSummary {
    int64_t size = 0;
    int features = 0;
    double avg_label = 0.0;
    double treatment_ratio = 0.0;                 // fraction of rows with w > 0
    std::optional<double> relative_uplift_pct;    // empty when the control mean is zero
};

DatasetSummary summarize(const UpliftDataset& data);

struct FoldSplit {
    std::vector<uint32_t> train;
    std::vector<uint32_t> test;
};

struct FoldPlan {
    std::vector<FoldSplit> folds;
    std::string warning;  // non-empty when stratification fell back to arm-only
};

// Deterministic k-fold split stratified jointly by (arm, outcome above mean).
// Strata smaller than k trigger a fallback to arm-only stratification.
FoldPlan split_folds(const UpliftDataset& data, int k, uint64_t seed);

}  // namespace utb
