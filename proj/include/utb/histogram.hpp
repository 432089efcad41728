#pragma once
#include <cstdint>
#include <span>
#include <vector>

#include "utb/binning.hpp"

namespace utb {

// Per-row statistic records, row-major with a fixed width. Slot 0 must be the
// row count contribution (1.0); the remaining slots belong to the booster.
struct RowStatsView {
    const double* data = nullptr;
    int width = 0;
    std::span<const double> row(int64_t i) const { return {data + i * width, static_cast<size_t>(width)}; }
};

// Aggregated statistics per (feature, bin). `totals` is accumulated directly
// over the rows in order, so it is the same for every feature.
struct HistogramSet {
    int width = 0;
    std::vector<std::vector<double>> feature_bins;  // [f], bin_count(f) * width
    std::vector<double> totals;                     // width

    std::span<const double> bin(int f, int b) const {
        return {feature_bins[f].data() + static_cast<size_t>(b) * width, static_cast<size_t>(width)};
    }
    // this -= other, elementwise; used to derive a sibling from its parent.
    void subtract(const HistogramSet& other);
};

// Exact aggregation of stats over the given rows (indices into the binned
// data; duplicates allowed). Feature columns are accumulated independently and
// sequentially in row order, so the result does not depend on num_threads.
HistogramSet build_histograms(const BinnedDataset& data, std::span<const uint32_t> rows,
                              const RowStatsView& stats, int num_threads);

}  // namespace utb
