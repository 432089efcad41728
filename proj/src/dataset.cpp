#include "utb/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string_view>

#include "utb/csv.hpp"
#include "utb/error.hpp"
#include "utb/rng.hpp"

namespace utb {

void UpliftDataset::validate() const {
    if (n <= 0) fail(ErrorKind::Validation, "dataset is empty");
    if (static_cast<int64_t>(outcome.size()) != n || static_cast<int64_t>(treatment.size()) != n)
        fail(ErrorKind::Validation, "outcome/treatment length does not match row count");
    if (static_cast<int64_t>(features.size()) != n * p)
        fail(ErrorKind::Validation, "feature matrix size does not match n*p");
    if (static_cast<int>(feature_names.size()) != p)
        fail(ErrorKind::Validation, "feature_names length does not match feature count");
    if (num_arms < 1) fail(ErrorKind::Validation, "at least one treatment arm is required");

    std::vector<int64_t> arm_count(num_arms + 1, 0);
    for (int64_t i = 0; i < n; ++i) {
        const int w = treatment[i];
        if (w < 0 || w > num_arms)
            fail(ErrorKind::Validation,
                 "treatment value " + std::to_string(w) + " outside {0.." + std::to_string(num_arms) + "}");
        ++arm_count[w];
    }
    if (arm_count[0] == 0) fail(ErrorKind::Validation, "no control rows");
    for (int a = 1; a <= num_arms; ++a)
        if (arm_count[a] == 0)
            fail(ErrorKind::Validation, "treatment arm " + std::to_string(a) + " has no rows");
    if (!true_effect.empty() && static_cast<int64_t>(true_effect.size()) != n * num_arms)
        fail(ErrorKind::Validation, "true_effect size does not match n*K");
}

UpliftDataset UpliftDataset::subset(std::span<const uint32_t> rows) const {
    UpliftDataset out;
    out.n = static_cast<int64_t>(rows.size());
    out.p = p;
    out.num_arms = num_arms;
    out.feature_names = feature_names;
    out.features.resize(out.n * p);
    out.outcome.resize(out.n);
    out.treatment.resize(out.n);
    if (!true_effect.empty()) out.true_effect.resize(out.n * num_arms);
    for (int64_t i = 0; i < out.n; ++i) {
        const int64_t src = rows[i];
        std::copy_n(features.data() + src * p, p, out.features.data() + i * p);
        out.outcome[i] = outcome[src];
        out.treatment[i] = treatment[src];
        if (!true_effect.empty())
            std::copy_n(true_effect.data() + src * num_arms, num_arms,
                        out.true_effect.data() + i * num_arms);
    }
    return out;
}

// Truth sidecars written by the synthetic generator; they are restored into
// true_effect on load, never treated as features.
static bool is_truth_sidecar(const std::string& name, int& arm) {
    constexpr std::string_view prefix = "__true_effect_";
    if (name.rfind(prefix, 0) != 0) return false;
    arm = 0;
    for (size_t i = prefix.size(); i < name.size(); ++i) {
        if (name[i] < '0' || name[i] > '9') return false;
        arm = arm * 10 + (name[i] - '0');
    }
    return arm >= 1;
}

UpliftDataset load_csv(const std::string& path, const std::string& outcome_col,
                       const std::string& treatment_col) {
    const auto table = read_csv_columns(path);
    int y_idx = -1, w_idx = -1;
    std::map<int, int> truth_cols;  // arm -> column index
    for (int i = 0; i < static_cast<int>(table.header.size()); ++i) {
        if (table.header[i] == outcome_col) y_idx = i;
        if (table.header[i] == treatment_col) w_idx = i;
        if (int arm = 0; is_truth_sidecar(table.header[i], arm)) truth_cols[arm] = i;
    }
    if (y_idx < 0) fail(ErrorKind::Config, "outcome column '" + outcome_col + "' not found");
    if (w_idx < 0) fail(ErrorKind::Config, "treatment column '" + treatment_col + "' not found");
    if (y_idx == w_idx) fail(ErrorKind::Config, "outcome and treatment name the same column");

    auto is_feature = [&](int i) {
        return i != y_idx && i != w_idx &&
               std::none_of(truth_cols.begin(), truth_cols.end(),
                            [i](const auto& kv) { return kv.second == i; });
    };

    UpliftDataset data;
    data.n = table.rows;
    for (int i = 0; i < static_cast<int>(table.header.size()); ++i)
        if (is_feature(i)) data.feature_names.push_back(table.header[i]);
    data.p = static_cast<int>(data.feature_names.size());

    data.outcome = table.columns[y_idx];
    for (int64_t r = 0; r < data.n; ++r)
        if (std::isnan(data.outcome[r]))
            fail(ErrorKind::Parse, "'" + path + "' row " + std::to_string(r + 1) +
                                       ": missing outcome value");

    // Treatment cells must be integers; the file value 0 is the control arm and
    // the remaining values are remapped to 1..K in ascending order.
    std::vector<int64_t> raw(data.n);
    std::map<int64_t, int> arm_of;
    for (int64_t r = 0; r < data.n; ++r) {
        const double v = table.columns[w_idx][r];
        if (std::isnan(v) || v != std::floor(v) || std::abs(v) > 1e9)
            fail(ErrorKind::Parse, "'" + path + "' row " + std::to_string(r + 1) +
                                       ": treatment value is not an integer");
        raw[r] = static_cast<int64_t>(v);
        arm_of.emplace(raw[r], 0);
    }
    if (!arm_of.count(0)) fail(ErrorKind::Validation, "no control rows (treatment value 0 absent)");
    // std::map iterates keys ascending; non-zero file values become arms 1..K
    // in that order.
    int next = 0;
    for (auto& [value, arm] : arm_of) arm = (value == 0) ? 0 : ++next;
    data.num_arms = next;

    data.treatment.resize(data.n);
    for (int64_t r = 0; r < data.n; ++r) data.treatment[r] = arm_of[raw[r]];

    data.features.resize(data.n * data.p);
    int f = 0;
    for (int i = 0; i < static_cast<int>(table.header.size()); ++i) {
        if (!is_feature(i)) continue;
        for (int64_t r = 0; r < data.n; ++r) data.features[r * data.p + f] = table.columns[i][r];
        ++f;
    }

    // Restore the known effects when one sidecar per arm is present.
    if (!truth_cols.empty() && static_cast<int>(truth_cols.size()) == data.num_arms &&
        truth_cols.begin()->first == 1 && truth_cols.rbegin()->first == data.num_arms) {
        data.true_effect.resize(data.n * data.num_arms);
        for (const auto& [arm, col] : truth_cols)
            for (int64_t r = 0; r < data.n; ++r)
                data.true_effect[r * data.num_arms + (arm - 1)] = table.columns[col][r];
    }

    data.validate();
    return data;
}

DatasetSummary summarize(const UpliftDataset& data) {
    DatasetSummary s;
    s.size = data.n;
    s.features = data.p;
    double sum_y = 0.0, sum_treated = 0.0, sum_control = 0.0;
    int64_t n_treated = 0, n_control = 0;
    for (int64_t i = 0; i < data.n; ++i) {
        sum_y += data.outcome[i];
        if (data.treatment[i] > 0) {
            sum_treated += data.outcome[i];
            ++n_treated;
        } else {
            sum_control += data.outcome[i];
            ++n_control;
        }
    }
    s.avg_label = data.n > 0 ? sum_y / static_cast<double>(data.n) : 0.0;
    s.treatment_ratio = data.n > 0 ? static_cast<double>(n_treated) / static_cast<double>(data.n) : 0.0;
    if (n_control > 0 && n_treated > 0) {
        const double mc = sum_control / static_cast<double>(n_control);
        const double mt = sum_treated / static_cast<double>(n_treated);
        if (mc != 0.0) s.relative_uplift_pct = 100.0 * (mt - mc) / mc;
    }
    return s;
}

FoldPlan split_folds(const UpliftDataset& data, int k, uint64_t seed) {
    if (k < 2) fail(ErrorKind::Config, "fold count must be at least 2");
    if (data.n < k) fail(ErrorKind::Config, "fewer rows than folds");
    data.validate();

    double mean_y = 0.0;
    for (double y : data.outcome) mean_y += y;
    mean_y /= static_cast<double>(data.n);

    auto stratum_joint = [&](int64_t i) {
        return data.treatment[i] * 2 + (data.outcome[i] > mean_y ? 1 : 0);
    };
    auto stratum_arm = [&](int64_t i) { return data.treatment[i]; };

    FoldPlan plan;
    std::vector<std::vector<uint32_t>> strata(2 * (data.num_arms + 1));
    for (int64_t i = 0; i < data.n; ++i) strata[stratum_joint(i)].push_back(static_cast<uint32_t>(i));

    bool fallback = false;
    for (const auto& s : strata)
        if (!s.empty() && static_cast<int>(s.size()) < k) fallback = true;
    if (fallback) {
        plan.warning = "a (arm, outcome) stratum has fewer rows than folds; stratifying by arm only";
        strata.assign(data.num_arms + 1, {});
        for (int64_t i = 0; i < data.n; ++i)
            strata[stratum_arm(i)].push_back(static_cast<uint32_t>(i));
    }

    Rng rng = Rng::stream(seed, "folds");
    std::vector<std::vector<uint32_t>> fold_rows(k);
    int cursor = 0;  // shared across strata so fold sizes stay within +-1
    for (auto& members : strata) {
        for (size_t i = members.size(); i > 1; --i)
            std::swap(members[i - 1], members[rng.below(i)]);
        for (uint32_t row : members) {
            fold_rows[cursor].push_back(row);
            cursor = (cursor + 1) % k;
        }
    }
    for (auto& rows : fold_rows) std::sort(rows.begin(), rows.end());

    plan.folds.resize(k);
    for (int f = 0; f < k; ++f) {
        plan.folds[f].test = fold_rows[f];
        for (int g = 0; g < k; ++g)
            if (g != f)
                plan.folds[f].train.insert(plan.folds[f].train.end(), fold_rows[g].begin(),
                                           fold_rows[g].end());
        std::sort(plan.folds[f].train.begin(), plan.folds[f].train.end());
    }
    return plan;
}

}  // namespace utb
