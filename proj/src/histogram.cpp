#include "utb/histogram.hpp"

#include "utb/threading.hpp"

namespace utb {

void HistogramSet::subtract(const HistogramSet& other) {
    for (size_t f = 0; f < feature_bins.size(); ++f) {
        auto& mine = feature_bins[f];
        const auto& theirs = other.feature_bins[f];
        for (size_t i = 0; i < mine.size(); ++i) mine[i] -= theirs[i];
    }
    for (int s = 0; s < width; ++s) totals[s] -= other.totals[s];
}

HistogramSet build_histograms(const BinnedDataset& data, std::span<const uint32_t> rows,
                              const RowStatsView& stats, int num_threads) {
    HistogramSet out;
    out.width = stats.width;
    out.feature_bins.resize(data.p);
    out.totals.assign(stats.width, 0.0);

    const int w = stats.width;
    parallel_for(data.p, num_threads, [&](int f) {
        auto& hist = out.feature_bins[f];
        hist.assign(static_cast<size_t>(data.bin_count(f)) * w, 0.0);
        const uint16_t* col = data.bins[f].data();
        for (const uint32_t r : rows) {
            double* slot = hist.data() + static_cast<size_t>(col[r]) * w;
            const double* src = stats.data + static_cast<size_t>(r) * w;
            for (int s = 0; s < w; ++s) slot[s] += src[s];
        }
    });

    for (const uint32_t r : rows) {
        const double* src = stats.data + static_cast<size_t>(r) * w;
        for (int s = 0; s < w; ++s) out.totals[s] += src[s];
    }
    return out;
}

}  // namespace utb
