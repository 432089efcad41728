#include "utb/causalgbm.hpp"

#include <cmath>
#include <numeric>

#include "utb/binning.hpp"
#include "utb/error.hpp"
#include "utb/grower.hpp"
#include "utb/rng.hpp"

namespace utb {

namespace {

// Row-stat layout: slot 0 is the row count, then [count_a, sum_g_a, sum_h_a]
// per arm a in 0..K. Width = 1 + 3*(K+1).
int stat_width(int num_arms) { return 1 + 3 * (num_arms + 1); }
int arm_slot(int arm) { return 1 + 3 * arm; }

// Arms without rows contribute nothing, so control-only stats reduce to the
// classic -G^2/(2H) score.
double leaf_loss_core(int num_arms, std::span<const double> s, double lambda) {
    const double v =
        s[arm_slot(0)] > 0.0 ? -s[arm_slot(0) + 1] / (s[arm_slot(0) + 2] + lambda) : 0.0;
    double g_all = 0.0, h_all = 0.0;
    for (int a = 0; a <= num_arms; ++a) {
        g_all += s[arm_slot(a) + 1];
        h_all += s[arm_slot(a) + 2];
    }
    double loss = g_all * v + 0.5 * (h_all + lambda) * v * v;
    for (int a = 1; a <= num_arms; ++a) {
        if (s[arm_slot(a)] <= 0.0) continue;
        const double ga = s[arm_slot(a) + 1];
        const double ha = s[arm_slot(a) + 2];
        const double num = ga + v * ha;
        loss -= num * num / (2.0 * (ha + lambda));
    }
    return loss;
}

std::span<const double> as_span(const std::vector<double>& v) { return {v.data(), v.size()}; }

std::vector<double> stats_to_slots(const CausalLeafStats& stats) {
    const int K = stats.num_arms();
    std::vector<double> s(stat_width(K), 0.0);
    s[0] = stats.count_all();
    for (int a = 0; a <= K; ++a) {
        s[arm_slot(a)] = stats.count[a];
        s[arm_slot(a) + 1] = stats.sum_g[a];
        s[arm_slot(a) + 2] = stats.sum_h[a];
    }
    return s;
}

void check_denominators(const CausalLeafStats& stats, double lambda) {
    for (int a = 0; a <= stats.num_arms(); ++a)
        if (stats.count[a] > 0.0 && stats.sum_h[a] + lambda == 0.0)
            fail(ErrorKind::Validation,
                 "degenerate leaf: zero hessian sum for arm " + std::to_string(a));
}

}  // namespace

double CausalLeafStats::count_all() const { return std::accumulate(count.begin(), count.end(), 0.0); }
double CausalLeafStats::sum_g_all() const { return std::accumulate(sum_g.begin(), sum_g.end(), 0.0); }
double CausalLeafStats::sum_h_all() const { return std::accumulate(sum_h.begin(), sum_h.end(), 0.0); }

void CausalConfig::validate() const {
    if (num_trees < 1) fail(ErrorKind::Config, "num_trees must be >= 1");
    if (!(shrinkage > 0.0 && shrinkage <= 1.0)) fail(ErrorKind::Config, "shrinkage must lie in (0,1]");
    if (max_bins < 2 || max_bins > 65535) fail(ErrorKind::Config, "max_bins must lie in [2, 65535]");
    growth.validate();
}

std::pair<double, std::vector<double>> leaf_weights(const CausalLeafStats& stats, double lambda) {
    check_denominators(stats, lambda);
    const int K = stats.num_arms();
    const double v =
        stats.count[0] > 0.0 ? -stats.sum_g[0] / (stats.sum_h[0] + lambda) : 0.0;
    std::vector<double> u(K, 0.0);
    for (int a = 1; a <= K; ++a)
        if (stats.count[a] > 0.0)
            u[a - 1] = -(stats.sum_g[a] + v * stats.sum_h[a]) / (stats.sum_h[a] + lambda);
    return {v, std::move(u)};
}

double leaf_loss(const CausalLeafStats& stats, double lambda) {
    check_denominators(stats, lambda);
    return leaf_loss_core(stats.num_arms(), as_span(stats_to_slots(stats)), lambda);
}

double split_gain(const CausalLeafStats& parent, const CausalLeafStats& left,
                  const CausalLeafStats& right, double lambda) {
    return leaf_loss(parent, lambda) - (leaf_loss(left, lambda) + leaf_loss(right, lambda));
}

BoosterModel fit_causalgbm(const UpliftDataset& data, const CausalConfig& cfg, int num_threads,
                           std::vector<double>* iter_loss) {
    cfg.validate();
    data.validate();

    const BinnedDataset binned = bin_features(data, cfg.max_bins);
    const bool boosting = cfg.ensemble_mode == EnsembleMode::boosting;
    const int K = data.num_arms;
    const int w = stat_width(K);

    const double arm_min = cfg.growth.min_samples_per_arm_leaf;
    const double lambda = cfg.growth.lambda;
    GainFn gain_fn = [K, w, arm_min, lambda, parent = std::vector<double>(w)](
                         std::span<const double> l,
                         std::span<const double> r) mutable -> std::optional<double> {
        for (int a = 0; a <= K; ++a)
            if (l[arm_slot(a)] < arm_min || r[arm_slot(a)] < arm_min) return std::nullopt;
        for (int s = 0; s < w; ++s) parent[s] = l[s] + r[s];
        return leaf_loss_core(K, as_span(parent), lambda) -
               (leaf_loss_core(K, l, lambda) + leaf_loss_core(K, r, lambda));
    };

    const double leaf_scale = boosting ? cfg.shrinkage : 1.0;
    LeafFn leaf_fn = [K, leaf_scale, lambda](std::span<const double> s) {
        std::vector<double> weights(K + 1, 0.0);
        for (int a = 0; a <= K; ++a)
            if (s[arm_slot(a)] < 1.0 || s[arm_slot(a) + 2] + lambda == 0.0)
                return weights;  // empty or degenerate arm at the root: no-op leaf
        const double v = -s[arm_slot(0) + 1] / (s[arm_slot(0) + 2] + lambda);
        weights[0] = leaf_scale * v;
        for (int a = 1; a <= K; ++a)
            weights[a] = leaf_scale * (-(s[arm_slot(a) + 1] + v * s[arm_slot(a) + 2]) /
                                       (s[arm_slot(a) + 2] + lambda));
        return weights;
    };

    BoosterModel model;
    model.kind = BoosterKind::causalgbm;
    model.mode = cfg.ensemble_mode;
    model.loss = cfg.loss;
    model.num_arms = K;
    model.shrinkage = cfg.shrinkage;
    model.seed = cfg.seed;
    model.num_trees = cfg.num_trees;
    model.max_bins = cfg.max_bins;
    model.growth = cfg.growth;
    model.feature_names = data.feature_names;

    std::vector<double> yhat(data.n, 0.0);
    std::vector<double> g(data.n), h(data.n);
    std::vector<double> stats(data.n * static_cast<int64_t>(w));
    std::vector<uint32_t> all_rows(data.n);
    std::iota(all_rows.begin(), all_rows.end(), 0u);

    auto fill_stats = [&] {
        for (int64_t i = 0; i < data.n; ++i) {
            double* s = stats.data() + i * w;
            std::fill(s, s + w, 0.0);
            s[0] = 1.0;
            const int slot = arm_slot(data.treatment[i]);
            s[slot] = 1.0;
            s[slot + 1] = g[i];
            s[slot + 2] = h[i];
        }
    };
    auto mean_loss = [&] {
        double total = 0.0;
        for (int64_t i = 0; i < data.n; ++i) total += loss_value(cfg.loss, data.outcome[i], yhat[i]);
        return total / static_cast<double>(data.n);
    };

    if (iter_loss) iter_loss->push_back(mean_loss());

    if (!boosting) {
        grad_hess(cfg.loss, data.outcome, yhat, g, h);  // frozen at the initial margin
        fill_stats();
    }

    std::vector<uint32_t> sample;
    for (int m = 0; m < cfg.num_trees; ++m) {
        if (boosting) {
            grad_hess(cfg.loss, data.outcome, yhat, g, h);
            fill_stats();
            GrownTree grown = grow_tree(binned, all_rows, {stats.data(), w}, gain_fn, leaf_fn,
                                        cfg.growth, num_threads);
            for (int64_t i = 0; i < data.n; ++i) {
                const auto& weights = grown.tree.nodes[grown.leaf_index[i]].weights;
                const int arm = data.treatment[i];
                yhat[i] += weights[0] + (arm > 0 ? weights[arm] : 0.0);
            }
            if (iter_loss) iter_loss->push_back(mean_loss());
            model.trees.push_back(std::move(grown.tree));
        } else {
            Rng rng = Rng::stream(cfg.seed, "causal.bootstrap", static_cast<uint64_t>(m));
            sample.resize(data.n);
            for (auto& r : sample) r = static_cast<uint32_t>(rng.below(static_cast<uint64_t>(data.n)));
            GrownTree grown = grow_tree(binned, sample, {stats.data(), w}, gain_fn, leaf_fn,
                                        cfg.growth, num_threads);
            model.trees.push_back(std::move(grown.tree));
        }
    }
    return model;
}

std::vector<double> predict_effect(const BoosterModel& model, const MatrixView& rows,
                                   EffectScale scale) {
    if (model.kind != BoosterKind::causalgbm)
        fail(ErrorKind::Config, "predict_effect called on a non-causalgbm model");
    model.check_predictable(rows);
    const int K = model.num_arms;
    const double denom = model.mode == EnsembleMode::bagging
                             ? static_cast<double>(model.trees.size())
                             : 1.0;

    std::vector<double> base(rows.n, 0.0);
    std::vector<double> effect(rows.n * K, 0.0);
    for (const auto& tree : model.trees)
        for (int64_t i = 0; i < rows.n; ++i) {
            const auto& weights = tree.leaf_weights_at(rows.row(i));
            base[i] += weights[0];
            for (int a = 1; a <= K; ++a) effect[i * K + (a - 1)] += weights[a];
        }
    for (auto& v : effect) v /= denom;

    if (scale == EffectScale::probability && model.loss == LossKind::logistic) {
        for (int64_t i = 0; i < rows.n; ++i) {
            const double f = base[i] / denom;
            for (int a = 0; a < K; ++a) {
                const double u = effect[i * K + a];
                effect[i * K + a] = sigmoid(f + u) - sigmoid(f);
            }
        }
    }
    return effect;
}

std::vector<double> predict_outcome(const BoosterModel& model, const MatrixView& rows, int arm,
                                    EffectScale scale) {
    if (model.kind != BoosterKind::causalgbm)
        fail(ErrorKind::Config, "predict_outcome called on a non-causalgbm model");
    if (arm < 0 || arm > model.num_arms)
        fail(ErrorKind::Config, "arm " + std::to_string(arm) + " outside {0.." +
                                    std::to_string(model.num_arms) + "}");
    model.check_predictable(rows);

    // Base and effect accumulate separately so outcome(a) - outcome(0) lands on
    // the same sums as predict_effect.
    std::vector<double> base(rows.n, 0.0);
    std::vector<double> eff(rows.n, 0.0);
    for (const auto& tree : model.trees)
        for (int64_t i = 0; i < rows.n; ++i) {
            const auto& weights = tree.leaf_weights_at(rows.row(i));
            base[i] += weights[0];
            if (arm > 0) eff[i] += weights[arm];
        }
    std::vector<double> out(rows.n);
    const double denom = model.mode == EnsembleMode::bagging
                             ? static_cast<double>(model.trees.size())
                             : 1.0;
    for (int64_t i = 0; i < rows.n; ++i)
        out[i] = base[i] / denom + (arm > 0 ? eff[i] / denom : 0.0);
    if (scale == EffectScale::probability && model.loss == LossKind::logistic)
        for (auto& v : out) v = sigmoid(v);
    return out;
}

}  // namespace utb
