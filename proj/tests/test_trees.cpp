#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "test_helpers.hpp"
#include "utb/binning.hpp"
#include "utb/grower.hpp"
#include "utb/tddp.hpp"

using namespace utb;

namespace {

// The tddp statistic layout, rebuilt here so the grower is exercised through
// plain callbacks: [count, sum_y, count_treated, sum_y_treated].
constexpr int kW = 4;

std::vector<double> make_stats(const UpliftDataset& data) {
    std::vector<double> stats(data.n * kW);
    for (int64_t i = 0; i < data.n; ++i) {
        double* s = stats.data() + i * kW;
        s[0] = 1.0;
        s[1] = data.outcome[i];
        s[2] = data.treatment[i] == 1 ? 1.0 : 0.0;
        s[3] = data.treatment[i] == 1 ? data.outcome[i] : 0.0;
    }
    return stats;
}

TddpNodeStats node_stats(std::span<const double> s) {
    TddpNodeStats st;
    st.n = s[0];
    st.n_treated = s[2];
    st.n_control = s[0] - s[2];
    st.sum_y_treated = s[3];
    st.sum_y_control = s[1] - s[3];
    return st;
}

GainFn ddp_gain_fn(double arm_min) {
    return [arm_min](std::span<const double> l, std::span<const double> r)
               -> std::optional<double> {
        const auto L = node_stats(l), R = node_stats(r);
        if (L.n_treated < arm_min || L.n_control < arm_min || R.n_treated < arm_min ||
            R.n_control < arm_min)
            return std::nullopt;
        return ddp_gain(L, R);
    };
}

LeafFn diff_leaf_fn() {
    return [](std::span<const double> s) {
        const auto st = node_stats(s);
        if (st.n_treated < 1 || st.n_control < 1) return std::vector<double>{0.0};
        return std::vector<double>{st.treated_mean() - st.control_mean()};
    };
}

std::vector<uint32_t> all_rows(int64_t n) {
    std::vector<uint32_t> rows(n);
    std::iota(rows.begin(), rows.end(), 0u);
    return rows;
}

}  // namespace

TEST_SUITE("trees") {

TEST_CASE("a single row fills exactly one non-NaN bin") {
    UpliftDataset data;
    data.n = 1;
    data.p = 1;
    data.num_arms = 1;
    data.features = {3.25};
    data.outcome = {2.0};
    data.treatment = {1};
    data.feature_names = {"f1"};
    const auto binned = bin_features(data, 255);
    const auto stats = make_stats(data);
    const auto hist = build_histograms(binned, all_rows(1), {stats.data(), kW}, 1);

    int nonzero = 0;
    for (int b = 0; b < binned.bin_count(0); ++b)
        if (hist.bin(0, b)[0] != 0.0) {
            ++nonzero;
            CHECK(hist.bin(0, b)[1] == 2.0);
            CHECK(hist.bin(0, b)[2] == 1.0);
        }
    CHECK(nonzero == 1);
}

TEST_CASE("histograms match a naive per-row oracle exactly") {
    auto data = testutil::random_dataset(200, 4, 21, false);
    for (int64_t i = 0; i < data.n; i += 9)
        data.features[i * data.p + 1] = std::numeric_limits<double>::quiet_NaN();
    const auto binned = bin_features(data, 16);
    const auto stats = make_stats(data);

    std::vector<uint32_t> rows;
    Rng rng(5);
    for (int64_t i = 0; i < data.n; ++i)
        if (rng.bernoulli(0.6)) rows.push_back(static_cast<uint32_t>(i));

    const auto hist = build_histograms(binned, rows, {stats.data(), kW}, 2);

    const auto single = build_histograms(binned, rows, {stats.data(), kW}, 1);
    const auto many = build_histograms(binned, rows, {stats.data(), kW}, 3);
    CHECK(single.feature_bins == hist.feature_bins);  // worker count never matters
    CHECK(many.feature_bins == hist.feature_bins);
    CHECK(single.totals == many.totals);

    for (int f = 0; f < data.p; ++f) {
        std::vector<double> naive(binned.bin_count(f) * kW, 0.0);
        for (const auto r : rows)
            for (int s = 0; s < kW; ++s) naive[binned.bins[f][r] * kW + s] += stats[r * kW + s];
        for (int b = 0; b < binned.bin_count(f); ++b)
            for (int s = 0; s < kW; ++s) CHECK(hist.bin(f, b)[s] == naive[b * kW + s]);
    }
}

TEST_CASE("histogram conservation and sibling subtraction") {
    const auto data = testutil::random_dataset(500, 3, 37, false);
    const auto binned = bin_features(data, 24);
    const auto stats = make_stats(data);
    const auto rows = all_rows(data.n);

    std::vector<uint32_t> left_rows, right_rows;
    for (const auto r : rows) (r % 3 == 0 ? left_rows : right_rows).push_back(r);

    auto parent = build_histograms(binned, rows, {stats.data(), kW}, 1);
    const auto left = build_histograms(binned, left_rows, {stats.data(), kW}, 1);
    const auto right = build_histograms(binned, right_rows, {stats.data(), kW}, 1);

    for (int f = 0; f < data.p; ++f) {
        std::vector<double> col_sum(kW, 0.0);
        for (int b = 0; b < binned.bin_count(f); ++b)
            for (int s = 0; s < kW; ++s) col_sum[s] += parent.bin(f, b)[s];
        CHECK(col_sum[0] == parent.totals[0]);  // counts conserve exactly
        CHECK(col_sum[2] == parent.totals[2]);
        for (int s : {1, 3})
            CHECK(col_sum[s] == doctest::Approx(parent.totals[s]).epsilon(1e-9));
    }

    parent.subtract(left);
    for (int f = 0; f < data.p; ++f)
        for (int b = 0; b < binned.bin_count(f); ++b)
            for (int s = 0; s < kW; ++s) {
                const double derived = parent.bin(f, b)[s];
                const double direct = right.bin(f, b)[s];
                if (s == 0 || s == 2)
                    CHECK(derived == direct);
                else
                    CHECK(derived == doctest::Approx(direct).epsilon(1e-9));
            }
}

TEST_CASE("max_leaves=1 yields a single leaf holding the root weight") {
    const auto data = testutil::random_dataset(300, 2, 41, false);
    const auto binned = bin_features(data, 64);
    const auto stats = make_stats(data);
    GrowthConfig cfg;
    cfg.max_leaves = 1;
    const auto grown = grow_tree(binned, all_rows(data.n), {stats.data(), kW}, ddp_gain_fn(5),
                                 diff_leaf_fn(), cfg, 1);
    REQUIRE(grown.tree.nodes.size() == 1);
    CHECK(grown.tree.num_leaves() == 1);

    TddpNodeStats st;
    for (int64_t i = 0; i < data.n; ++i) {
        st.n += 1;
        if (data.treatment[i] == 1) {
            st.n_treated += 1;
            st.sum_y_treated += data.outcome[i];
        } else {
            st.n_control += 1;
            st.sum_y_control += data.outcome[i];
        }
    }
    CHECK(grown.tree.nodes[0].weights[0] ==
          doctest::Approx(st.treated_mean() - st.control_mean()).epsilon(1e-12));
}

TEST_CASE("a perfectly separating feature is chosen over noise") {
    UpliftDataset data;
    data.n = 240;
    data.p = 3;
    data.num_arms = 1;
    data.feature_names = {"signal", "n1", "n2"};
    data.features.resize(data.n * 3);
    data.outcome.resize(data.n);
    data.treatment.resize(data.n);
    Rng rng(17);
    for (int64_t i = 0; i < data.n; ++i) {
        const double sig = i % 2 ? 1.0 : 0.0;
        data.features[i * 3 + 0] = sig;
        data.features[i * 3 + 1] = rng.uniform01();
        data.features[i * 3 + 2] = rng.uniform01();
        data.treatment[i] = (i / 2) % 2;
        // uplift 1 where signal=1, 0 where signal=0
        data.outcome[i] = (sig == 1.0 && data.treatment[i] == 1) ? 1.0 : 0.0;
    }
    const auto binned = bin_features(data, 32);
    const auto stats = make_stats(data);
    GrowthConfig cfg;
    cfg.max_leaves = 2;
    cfg.min_samples_leaf = 5;
    cfg.min_samples_per_arm_leaf = 2;
    const auto grown = grow_tree(binned, all_rows(data.n), {stats.data(), kW}, ddp_gain_fn(2),
                                 diff_leaf_fn(), cfg, 1);
    REQUIRE(grown.tree.nodes.size() == 3);
    CHECK(grown.tree.nodes[0].feature == 0);

    // Exhaustive oracle over every (feature, raw threshold) candidate.
    double best_gain = -1.0;
    int best_feature = -1;
    for (int f = 0; f < 3; ++f) {
        std::vector<double> cuts;
        for (int64_t i = 0; i < data.n; ++i) cuts.push_back(data.at(i, f));
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
        for (const double cut : cuts) {
            TddpNodeStats L, R;
            for (int64_t i = 0; i < data.n; ++i) {
                auto& side = data.at(i, f) <= cut ? L : R;
                side.n += 1;
                if (data.treatment[i] == 1) {
                    side.n_treated += 1;
                    side.sum_y_treated += data.outcome[i];
                } else {
                    side.n_control += 1;
                    side.sum_y_control += data.outcome[i];
                }
            }
            if (L.n_treated < 2 || L.n_control < 2 || R.n_treated < 2 || R.n_control < 2) continue;
            const double g = ddp_gain(L, R);
            if (g > best_gain) {
                best_gain = g;
                best_feature = f;
            }
        }
    }
    CHECK(best_feature == 0);
    CHECK(grown.tree.nodes[0].feature == best_feature);
}

TEST_CASE("bit-identical gains break ties toward the lower feature index") {
    UpliftDataset data;
    data.n = 80;
    data.p = 2;
    data.num_arms = 1;
    data.feature_names = {"a", "b"};
    data.features.resize(data.n * 2);
    data.outcome.resize(data.n);
    data.treatment.resize(data.n);
    for (int64_t i = 0; i < data.n; ++i) {
        const double v = i % 2 ? 1.0 : 0.0;
        data.features[i * 2 + 0] = v;  // identical columns -> identical gains
        data.features[i * 2 + 1] = v;
        data.treatment[i] = (i / 2) % 2;
        data.outcome[i] = (v == 1.0 && data.treatment[i] == 1) ? 1.0 : 0.0;
    }
    const auto binned = bin_features(data, 8);
    const auto stats = make_stats(data);
    GrowthConfig cfg;
    cfg.max_leaves = 2;
    cfg.min_samples_leaf = 2;
    cfg.min_samples_per_arm_leaf = 1;
    const auto grown = grow_tree(binned, all_rows(data.n), {stats.data(), kW}, ddp_gain_fn(1),
                                 diff_leaf_fn(), cfg, 1);
    CHECK(grown.tree.nodes[0].feature == 0);
}

TEST_CASE("tied frontier leaves split in creation order") {
    // Root splits on the strong feature; both children then hold bit-identical
    // candidate gains on the second feature, so with room for one more split
    // the earlier-created (left) child must win.
    UpliftDataset data;
    data.p = 2;
    data.num_arms = 1;
    data.feature_names = {"strong", "weak"};
    for (const double f0 : {0.0, 1.0})
        for (const double f1 : {0.0, 1.0})
            for (const int w : {0, 1})
                for (int rep = 0; rep < 12; ++rep) {
                    data.features.push_back(f0);
                    data.features.push_back(f1);
                    data.treatment.push_back(w);
                    data.outcome.push_back(w ? 2.0 * f0 + f1 : 0.0);
                    ++data.n;
                }
    const auto binned = bin_features(data, 8);
    const auto stats = make_stats(data);
    GrowthConfig cfg;
    cfg.max_leaves = 3;
    cfg.min_samples_leaf = 4;
    cfg.min_samples_per_arm_leaf = 2;
    const auto grown = grow_tree(binned, all_rows(data.n), {stats.data(), kW}, ddp_gain_fn(2),
                                 diff_leaf_fn(), cfg, 1);
    REQUIRE(grown.tree.nodes.size() == 5);
    CHECK(grown.tree.nodes[0].feature == 0);
    CHECK_FALSE(grown.tree.nodes[1].is_leaf());  // left child split first on the tie
    CHECK(grown.tree.nodes[1].feature == 1);
    CHECK(grown.tree.nodes[2].is_leaf());
}

TEST_CASE("NaN rows pick the side that maximizes gain") {
    // uplift 0 at f=1, uplift 1 at f=2; NaN rows share the high-uplift pattern,
    // so the best split sends NaN right; mirrored labels send it left.
    for (const bool nan_matches_high : {true, false}) {
        UpliftDataset data;
        data.p = 1;
        data.num_arms = 1;
        data.feature_names = {"f1"};
        auto add_rows = [&](double value, double uplift) {
            for (const int w : {0, 1})
                for (int rep = 0; rep < 20; ++rep) {
                    data.features.push_back(value);
                    data.treatment.push_back(w);
                    data.outcome.push_back(w ? uplift : 0.0);
                    ++data.n;
                }
        };
        const double nan = std::numeric_limits<double>::quiet_NaN();
        add_rows(1.0, nan_matches_high ? 0.0 : 1.0);
        add_rows(2.0, nan_matches_high ? 1.0 : 0.0);
        add_rows(nan, 1.0);

        const auto binned = bin_features(data, 8);
        const auto stats = make_stats(data);
        GrowthConfig cfg;
        cfg.max_leaves = 2;
        cfg.min_samples_leaf = 5;
        cfg.min_samples_per_arm_leaf = 2;
        const auto grown = grow_tree(binned, all_rows(data.n), {stats.data(), kW}, ddp_gain_fn(2),
                                     diff_leaf_fn(), cfg, 1);
        REQUIRE_FALSE(grown.tree.nodes[0].is_leaf());
        CHECK(grown.tree.nodes[0].nan_left == !nan_matches_high);

        std::vector<double> nan_row{nan};
        const double weight = grown.tree.leaf_weights_at(nan_row)[0];
        CHECK(weight == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("routing raw rows agrees with binning-then-routing") {
    auto data = testutil::random_dataset(400, 5, 53, false);
    for (int64_t i = 0; i < data.n; i += 7)
        data.features[i * data.p + 2] = std::numeric_limits<double>::quiet_NaN();
    const auto binned = bin_features(data, 12);
    const auto stats = make_stats(data);
    GrowthConfig cfg;
    cfg.max_leaves = 8;
    cfg.min_samples_leaf = 10;
    cfg.min_samples_per_arm_leaf = 3;
    const auto grown = grow_tree(binned, all_rows(data.n), {stats.data(), kW}, ddp_gain_fn(3),
                                 diff_leaf_fn(), cfg, 1);
    REQUIRE(grown.tree.num_leaves() > 1);

    for (int64_t i = 0; i < 100; ++i) {
        const auto row = data.row(i);
        // oracle: walk the tree on bin indices instead of raw values
        int idx = 0;
        while (!grown.tree.nodes[idx].is_leaf()) {
            const auto& node = grown.tree.nodes[idx];
            const uint16_t b = binned.bins[node.feature][i];
            const bool left = b == 0 ? node.nan_left : b <= node.threshold_bin;
            idx = left ? node.left : node.right;
        }
        CHECK(grown.tree.route(row) == idx);
    }
}

TEST_CASE("a row exactly on the threshold goes left") {
    UpliftTree tree;
    tree.nodes.resize(3);
    tree.nodes[0].feature = 0;
    tree.nodes[0].threshold = 2.5;
    tree.nodes[0].threshold_bin = 1;
    tree.nodes[0].left = 1;
    tree.nodes[0].right = 2;
    tree.nodes[1].weights = {1.0};
    tree.nodes[2].weights = {2.0};

    const double on = 2.5, above = 2.5000001;
    CHECK(tree.route(std::span<const double>(&on, 1)) == 1);
    CHECK(tree.route(std::span<const double>(&above, 1)) == 2);

    UpliftTree single;
    single.nodes.resize(1);
    single.nodes[0].weights = {0.5};
    CHECK(single.route(std::span<const double>(&on, 1)) == 0);
}

TEST_CASE("leaves partition the training rows") {
    const auto data = testutil::random_dataset(600, 4, 61, false);
    const auto binned = bin_features(data, 32);
    const auto stats = make_stats(data);
    GrowthConfig cfg;
    cfg.max_leaves = 10;
    cfg.min_samples_leaf = 10;
    const auto grown = grow_tree(binned, all_rows(data.n), {stats.data(), kW}, ddp_gain_fn(5),
                                 diff_leaf_fn(), cfg, 1);

    std::set<int> leaf_ids;
    for (size_t i = 0; i < grown.tree.nodes.size(); ++i)
        if (grown.tree.nodes[i].is_leaf()) leaf_ids.insert(static_cast<int>(i));

    int64_t rows_seen = 0;
    std::vector<int64_t> per_leaf(grown.tree.nodes.size(), 0);
    for (const auto leaf : grown.leaf_index) {
        REQUIRE(leaf >= 0);
        CHECK(leaf_ids.count(leaf) == 1);
        ++per_leaf[leaf];
        ++rows_seen;
    }
    CHECK(rows_seen == data.n);
    for (const auto leaf : leaf_ids) CHECK(per_leaf[leaf] >= cfg.min_samples_leaf);
}

TEST_CASE("executed splits all clear min_gain") {
    const auto data = testutil::random_dataset(500, 3, 67, false);
    const auto binned = bin_features(data, 16);
    const auto stats = make_stats(data);
    GrowthConfig cfg;
    cfg.max_leaves = 12;
    cfg.min_samples_leaf = 5;
    cfg.min_samples_per_arm_leaf = 2;
    cfg.min_gain = 0.05;
    const auto grown = grow_tree(binned, all_rows(data.n), {stats.data(), kW}, ddp_gain_fn(2),
                                 diff_leaf_fn(), cfg, 1);

    // Recompute every internal node's gain from its routed rows.
    std::vector<std::vector<uint32_t>> node_rows(grown.tree.nodes.size());
    for (int64_t i = 0; i < data.n; ++i) {
        int idx = 0;
        node_rows[0].push_back(static_cast<uint32_t>(i));
        while (!grown.tree.nodes[idx].is_leaf()) {
            const auto& node = grown.tree.nodes[idx];
            const uint16_t b = binned.bins[node.feature][i];
            idx = (b == 0 ? node.nan_left : b <= node.threshold_bin) ? node.left : node.right;
            node_rows[idx].push_back(static_cast<uint32_t>(i));
        }
    }
    int internal = 0;
    for (size_t nd = 0; nd < grown.tree.nodes.size(); ++nd) {
        const auto& node = grown.tree.nodes[nd];
        if (node.is_leaf()) continue;
        ++internal;
        auto accumulate = [&](const std::vector<uint32_t>& rows) {
            TddpNodeStats st;
            for (const auto r : rows) {
                st.n += 1;
                if (data.treatment[r] == 1) {
                    st.n_treated += 1;
                    st.sum_y_treated += data.outcome[r];
                } else {
                    st.n_control += 1;
                    st.sum_y_control += data.outcome[r];
                }
            }
            return st;
        };
        const double gain = ddp_gain(accumulate(node_rows[node.left]),
                                     accumulate(node_rows[node.right]));
        CHECK(gain > cfg.min_gain * (1.0 - 1e-9));
    }
    CHECK(internal == grown.tree.num_leaves() - 1);
}

TEST_CASE("growth is identical for any thread count") {
    const auto data = testutil::random_dataset(700, 6, 71, false);
    const auto binned = bin_features(data, 40);
    const auto stats = make_stats(data);
    GrowthConfig cfg;
    cfg.max_leaves = 15;
    cfg.min_samples_leaf = 8;
    cfg.min_samples_per_arm_leaf = 2;

    const auto rows = all_rows(data.n);
    const auto a = grow_tree(binned, rows, {stats.data(), kW}, ddp_gain_fn(2), diff_leaf_fn(), cfg, 1);
    const auto b = grow_tree(binned, rows, {stats.data(), kW}, ddp_gain_fn(2), diff_leaf_fn(), cfg, 4);
    REQUIRE(a.tree.nodes.size() == b.tree.nodes.size());
    for (size_t i = 0; i < a.tree.nodes.size(); ++i) {
        CHECK(a.tree.nodes[i].feature == b.tree.nodes[i].feature);
        CHECK(a.tree.nodes[i].threshold == b.tree.nodes[i].threshold);
        CHECK(a.tree.nodes[i].weights == b.tree.nodes[i].weights);
    }
    CHECK(a.leaf_index == b.leaf_index);
}

TEST_CASE("a root that cannot satisfy arm minimums becomes a single leaf") {
    auto data = testutil::random_dataset(100, 2, 73, false);
    for (int64_t i = 0; i < data.n; ++i) data.treatment[i] = i < 2 ? 1 : 0;  // two treated rows
    const auto binned = bin_features(data, 16);
    const auto stats = make_stats(data);
    GrowthConfig cfg;
    cfg.max_leaves = 8;
    cfg.min_samples_per_arm_leaf = 5;
    const auto grown = grow_tree(binned, all_rows(data.n), {stats.data(), kW}, ddp_gain_fn(5),
                                 diff_leaf_fn(), cfg, 1);
    CHECK(grown.tree.nodes.size() == 1);
    CHECK(grown.tree.num_leaves() == 1);
}

TEST_CASE("max_depth bounds the tree") {
    const auto data = testutil::random_dataset(800, 4, 79, false);
    const auto binned = bin_features(data, 32);
    const auto stats = make_stats(data);
    GrowthConfig cfg;
    cfg.max_leaves = 64;
    cfg.max_depth = 2;
    cfg.min_samples_leaf = 5;
    cfg.min_samples_per_arm_leaf = 1;
    const auto grown = grow_tree(binned, all_rows(data.n), {stats.data(), kW}, ddp_gain_fn(1),
                                 diff_leaf_fn(), cfg, 1);
    CHECK(grown.tree.num_leaves() <= 4);

    std::function<int(int)> depth_of = [&](int idx) -> int {
        const auto& node = grown.tree.nodes[idx];
        if (node.is_leaf()) return 0;
        return 1 + std::max(depth_of(node.left), depth_of(node.right));
    };
    CHECK(depth_of(0) <= 2);
}

}  // TEST_SUITE
