#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "test_helpers.hpp"
#include "utb/binning.hpp"
#include "utb/error.hpp"

using namespace utb;

namespace {

UpliftDataset one_feature(const std::vector<double>& values) {
    UpliftDataset data;
    data.n = static_cast<int64_t>(values.size());
    data.p = 1;
    data.num_arms = 1;
    data.features = values;
    data.outcome.assign(data.n, 0.0);
    data.treatment.assign(data.n, 0);
    data.feature_names = {"f1"};
    return data;
}

}  // namespace

TEST_SUITE("binning") {

TEST_CASE("few distinct values get one bin each") {
    const auto binned = bin_features(one_feature({1, 2, 3, 4}), 255);
    REQUIRE(binned.boundaries[0].size() == 4);
    CHECK(binned.boundaries[0][0] == 1.0);
    CHECK(binned.boundaries[0][1] == 2.0);
    CHECK(binned.boundaries[0][2] == 3.0);
    CHECK(std::isinf(binned.boundaries[0][3]));
    CHECK(binned.bins[0] == std::vector<uint16_t>{1, 2, 3, 4});
}

TEST_CASE("an all-NaN feature has no boundaries and lands in bin 0") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const auto binned = bin_features(one_feature({nan, nan, nan}), 255);
    CHECK(binned.boundaries[0].empty());
    CHECK(binned.bins[0] == std::vector<uint16_t>{0, 0, 0});
}

TEST_CASE("quantile edges match a direct quantile computation") {
    std::vector<double> values(1000);
    Rng rng(42);
    for (auto& v : values) v = rng.uniform01();
    const auto binned = bin_features(one_feature(values), 10);

    // Oracle: the k/10 empirical quantiles of the sorted sample.
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> expected;
    for (int k = 1; k < 10; ++k) expected.push_back(sorted[(k * 1000 + 9) / 10 - 1]);
    expected.push_back(std::numeric_limits<double>::infinity());

    REQUIRE(binned.boundaries[0].size() == expected.size());
    for (size_t i = 0; i < expected.size(); ++i) CHECK(binned.boundaries[0][i] == expected[i]);

    std::vector<int> counts(11, 0);
    for (const auto b : binned.bins[0]) ++counts[b];
    CHECK(counts[0] == 0);
    for (int b = 1; b <= 10; ++b) CHECK(counts[b] == 100);
}

TEST_CASE("binning is monotone in the raw value") {
    std::vector<double> values(500);
    Rng rng(7);
    for (size_t i = 0; i < values.size(); ++i)
        values[i] = i % 13 == 0 ? std::numeric_limits<double>::quiet_NaN()
                                : std::floor(rng.uniform01() * 50.0);
    const auto binned = bin_features(one_feature(values), 16);
    for (size_t i = 0; i < values.size(); ++i)
        for (size_t j = 0; j < values.size(); j += 17) {
            if (std::isnan(values[i]) || std::isnan(values[j])) continue;
            if (values[i] <= values[j]) CHECK(binned.bins[0][i] <= binned.bins[0][j]);
        }
}

TEST_CASE("NaN maps to bin 0 and distinct counts are preserved") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const auto binned = bin_features(one_feature({nan, 5, 5, 2, nan, 9}), 255);
    CHECK(binned.bins[0] == std::vector<uint16_t>{0, 2, 2, 1, 0, 3});
    CHECK(binned.boundaries[0].size() == 3);  // three distinct values -> three bins
}

TEST_CASE("binning a fixed input twice gives identical results") {
    const auto data = testutil::random_dataset(800, 5, 3, false);
    const auto a = bin_features(data, 32);
    const auto b = bin_features(data, 32);
    CHECK(a.boundaries == b.boundaries);
    CHECK(a.bins == b.bins);
}

TEST_CASE("duplicated quantiles merge on skewed data") {
    // 900 copies of the max plus 100 distinct small values: most quantile cuts
    // collapse onto the repeated value and must be merged away.
    std::vector<double> values;
    for (int i = 0; i < 100; ++i) values.push_back(i * 0.01);
    for (int i = 0; i < 900; ++i) values.push_back(9.0);
    const auto binned = bin_features(one_feature(values), 10);

    const auto& edges = binned.boundaries[0];
    REQUIRE(edges.size() >= 2);
    CHECK(edges.size() <= 10);
    for (size_t i = 1; i < edges.size(); ++i) CHECK(edges[i] > edges[i - 1]);  // strictly sorted
    CHECK(std::isinf(edges.back()));

    int top_bin_count = 0;
    const uint16_t top_bin = binned.bins[0][100];  // a 9.0 row
    for (size_t i = 0; i < values.size(); ++i)
        if (binned.bins[0][i] == top_bin) ++top_bin_count;
    CHECK(top_bin_count == 900);
}

TEST_CASE("max_bins bounds are enforced") {
    const auto data = one_feature({1, 2, 3});
    CHECK_THROWS_AS(bin_features(data, 1), Error);
    CHECK_THROWS_AS(bin_features(data, 70000), Error);
    CHECK_NOTHROW(bin_features(data, 2));
}

}  // TEST_SUITE
