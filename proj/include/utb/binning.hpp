#pragma once
#include <cstdint>
#include <vector>

#include "utb/dataset.hpp"

namespace utb {

// Equal-frequency quantized view of a dataset's features. Bin 0 is reserved
// for NaN; non-NaN values of feature f occupy bins 1..boundaries[f].size(),
// where boundaries[f] lists ascending upper edges and ends with +inf whenever
// the feature has any non-NaN value. bin(x) <= t exactly when
// x <= boundaries[f][t-1], which is the split convention used everywhere.
struct BinnedDataset {
    int64_t n = 0;
    int p = 0;
    int max_bins = 255;
    std::vector<std::vector<uint16_t>> bins;       // [feature][row]
    std::vector<std::vector<double>> boundaries;   // [feature], ascending upper edges

    // Bin slots for feature f, including the NaN bin.
    int bin_count(int f) const { return static_cast<int>(boundaries[f].size()) + 1; }
};

// Quantile binning of each feature. A feature with c <= max_bins distinct
// non-NaN values gets exactly c non-NaN bins; otherwise edges sit at the
// k/max_bins empirical quantiles with duplicates merged.
BinnedDataset bin_features(const UpliftDataset& data, int max_bins);

// Bin index of a raw value under the edges built above (0 for NaN).
int bin_of(double x, const std::vector<double>& edges);

}  // namespace utb
