#include "utb/tddp.hpp"

#include <numeric>

#include "utb/binning.hpp"
#include "utb/error.hpp"
#include "utb/grower.hpp"
#include "utb/rng.hpp"

namespace utb {

namespace {

// Row-stat layout: [count, sum_y, count_treated, sum_y_treated].
constexpr int kStatWidth = 4;

TddpNodeStats stats_from(std::span<const double> s) {
    TddpNodeStats st;
    st.n = s[0];
    st.n_treated = s[2];
    st.n_control = s[0] - s[2];
    st.sum_y_treated = s[3];
    st.sum_y_control = s[1] - s[3];
    return st;
}

void fill_row_stats(const UpliftDataset& data, const std::vector<double>& working_y,
                    std::vector<double>& stats) {
    stats.resize(data.n * kStatWidth);
    for (int64_t i = 0; i < data.n; ++i) {
        double* s = stats.data() + i * kStatWidth;
        const bool treated = data.treatment[i] == 1;
        s[0] = 1.0;
        s[1] = working_y[i];
        s[2] = treated ? 1.0 : 0.0;
        s[3] = treated ? working_y[i] : 0.0;
    }
}

double variance(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double ss = 0.0;
    for (const double x : v) ss += (x - mean) * (x - mean);
    return ss / static_cast<double>(v.size());
}

}  // namespace

void TddpConfig::validate() const {
    if (num_trees < 1) fail(ErrorKind::Config, "num_trees must be >= 1");
    if (!(shrinkage > 0.0 && shrinkage <= 1.0)) fail(ErrorKind::Config, "shrinkage must lie in (0,1]");
    if (max_bins < 2 || max_bins > 65535) fail(ErrorKind::Config, "max_bins must lie in [2, 65535]");
    growth.validate();
}

double ddp_gain(const TddpNodeStats& left, const TddpNodeStats& right) {
    const double n = left.n + right.n;
    const double diff =
        (left.treated_mean() - left.control_mean()) - (right.treated_mean() - right.control_mean());
    return (left.n * right.n / n) * diff * diff;
}

double tddp_leaf_weight(const TddpNodeStats& stats, double shrinkage) {
    return shrinkage * (stats.treated_mean() - stats.control_mean());
}

void transform_labels(std::vector<double>& working_y, const UpliftTree& tree,
                      const UpliftDataset& data) {
    for (int64_t i = 0; i < data.n; ++i)
        if (data.treatment[i] == 1) working_y[i] -= tree.nodes[tree.route(data.row(i))].weights[0];
}

BoosterModel fit_tddp(const UpliftDataset& data, const TddpConfig& cfg, int num_threads,
                      std::vector<double>* label_variance) {
    cfg.validate();
    data.validate();
    if (data.num_arms != 1)
        fail(ErrorKind::Unsupported, "tddp supports binary treatment only (found " +
                                         std::to_string(data.num_arms) + " treatment arms)");

    const BinnedDataset binned = bin_features(data, cfg.max_bins);
    const bool boosting = cfg.ensemble_mode == EnsembleMode::boosting;

    const double arm_min = cfg.growth.min_samples_per_arm_leaf;
    GainFn gain_fn = [arm_min](std::span<const double> l, std::span<const double> r)
        -> std::optional<double> {
        const TddpNodeStats left = stats_from(l);
        const TddpNodeStats right = stats_from(r);
        if (left.n_treated < arm_min || left.n_control < arm_min || right.n_treated < arm_min ||
            right.n_control < arm_min)
            return std::nullopt;
        return ddp_gain(left, right);
    };

    const double leaf_scale = boosting ? cfg.shrinkage : 1.0;
    LeafFn leaf_fn = [leaf_scale](std::span<const double> s) {
        const TddpNodeStats st = stats_from(s);
        if (st.n_treated < 1.0 || st.n_control < 1.0) return std::vector<double>{0.0};
        return std::vector<double>{tddp_leaf_weight(st, leaf_scale)};
    };

    BoosterModel model;
    model.kind = BoosterKind::tddp;
    model.mode = cfg.ensemble_mode;
    model.loss = LossKind::squared;
    model.num_arms = 1;
    model.shrinkage = cfg.shrinkage;
    model.seed = cfg.seed;
    model.num_trees = cfg.num_trees;
    model.max_bins = cfg.max_bins;
    model.growth = cfg.growth;
    model.feature_names = data.feature_names;

    std::vector<double> working_y = data.outcome;
    std::vector<double> stats;
    std::vector<uint32_t> all_rows(data.n);
    std::iota(all_rows.begin(), all_rows.end(), 0u);

    if (!boosting) fill_row_stats(data, working_y, stats);  // labels stay frozen

    std::vector<uint32_t> sample;
    for (int m = 0; m < cfg.num_trees; ++m) {
        if (boosting) {
            fill_row_stats(data, working_y, stats);
            GrownTree grown = grow_tree(binned, all_rows, {stats.data(), kStatWidth}, gain_fn,
                                        leaf_fn, cfg.growth, num_threads);
            transform_labels(working_y, grown.tree, data);
            if (label_variance) label_variance->push_back(variance(working_y));
            model.trees.push_back(std::move(grown.tree));
        } else {
            Rng rng = Rng::stream(cfg.seed, "tddp.bootstrap", static_cast<uint64_t>(m));
            sample.resize(data.n);
            for (auto& r : sample) r = static_cast<uint32_t>(rng.below(static_cast<uint64_t>(data.n)));
            GrownTree grown = grow_tree(binned, sample, {stats.data(), kStatWidth}, gain_fn, leaf_fn,
                                        cfg.growth, num_threads);
            model.trees.push_back(std::move(grown.tree));
        }
    }
    return model;
}

std::vector<double> predict_tddp(const BoosterModel& model, const MatrixView& rows) {
    if (model.kind != BoosterKind::tddp)
        fail(ErrorKind::Config, "predict_tddp called on a non-tddp model");
    model.check_predictable(rows);

    std::vector<double> out(rows.n, 0.0);
    for (const auto& tree : model.trees)
        for (int64_t i = 0; i < rows.n; ++i) out[i] += tree.leaf_weights_at(rows.row(i))[0];
    if (model.mode == EnsembleMode::bagging)
        for (auto& v : out) v /= static_cast<double>(model.trees.size());
    return out;
}

}  // namespace utb
