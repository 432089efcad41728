#include "utb/binning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "utb/error.hpp"

namespace utb {

namespace {

std::vector<double> quantile_edges(std::vector<double>& sorted, int max_bins) {
    std::vector<double> edges;
    if (sorted.empty()) return edges;  // all-NaN feature: no bins beyond the NaN bin

    const int64_t m = static_cast<int64_t>(sorted.size());
    std::vector<double> distinct;
    distinct.reserve(std::min<int64_t>(m, max_bins + 1));
    for (int64_t i = 0; i < m; ++i)
        if (distinct.empty() || sorted[i] != distinct.back()) distinct.push_back(sorted[i]);

    if (static_cast<int>(distinct.size()) <= max_bins) {
        // One bin per distinct value: edges are all values but the largest.
        edges.assign(distinct.begin(), distinct.end() - 1);
    } else {
        // Empirical k/max_bins quantiles, duplicates merged.
        for (int k = 1; k < max_bins; ++k) {
            const int64_t pos = (static_cast<int64_t>(k) * m + max_bins - 1) / max_bins - 1;
            const double q = sorted[pos];
            if (edges.empty() || q != edges.back()) edges.push_back(q);
        }
        if (!edges.empty() && edges.back() == sorted.back()) edges.pop_back();
    }
    edges.push_back(std::numeric_limits<double>::infinity());
    return edges;
}

}  // namespace

int bin_of(double x, const std::vector<double>& edges) {
    if (std::isnan(x)) return 0;
    const auto it = std::lower_bound(edges.begin(), edges.end(), x);
    return static_cast<int>(it - edges.begin()) + 1;
}

BinnedDataset bin_features(const UpliftDataset& data, int max_bins) {
    if (max_bins < 2 || max_bins > 65535)
        fail(ErrorKind::Config, "max_bins must lie in [2, 65535]");

    BinnedDataset out;
    out.n = data.n;
    out.p = data.p;
    out.max_bins = max_bins;
    out.bins.resize(data.p);
    out.boundaries.resize(data.p);

    for (int f = 0; f < data.p; ++f) {
        std::vector<double> values;
        values.reserve(data.n);
        for (int64_t i = 0; i < data.n; ++i) {
            const double v = data.at(i, f);
            if (!std::isnan(v)) values.push_back(v);
        }
        std::sort(values.begin(), values.end());
        out.boundaries[f] = quantile_edges(values, max_bins);

        auto& col = out.bins[f];
        col.resize(data.n);
        for (int64_t i = 0; i < data.n; ++i)
            col[i] = static_cast<uint16_t>(bin_of(data.at(i, f), out.boundaries[f]));
    }
    return out;
}

}  // namespace utb
