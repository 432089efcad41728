#pragma once
#include <functional>
#include <optional>

#include "utb/histogram.hpp"
#include "utb/tree.hpp"

namespace utb {

// Split gain over (left, right) aggregated statistics; empty result marks an
// infeasible candidate (e.g. an arm below its per-leaf minimum). The parent is
// the elementwise sum of the two sides.
using GainFn =
    std::function<std::optional<double>(std::span<const double>, std::span<const double>)>;

// Leaf weight vector from a node's aggregated statistics.
using LeafFn = std::function<std::vector<double>(std::span<const double>)>;

struct GrownTree {
    UpliftTree tree;
    std::vector<int32_t> leaf_index;  // leaf node id per entry of `rows`
};

// Leaf-wise (best-first) growth: repeatedly split the frontier leaf whose best
// candidate has the largest gain, until max_leaves is reached or no candidate
// has gain > min_gain with both children satisfying min_samples_leaf and the
// gain_fn feasibility. Candidate ties break toward the lower feature index,
// then the lower threshold bin, then nan_left=false; frontier ties break
// toward the earlier-created leaf. `rows` may contain duplicates.
GrownTree grow_tree(const BinnedDataset& data, std::span<const uint32_t> rows,
                    const RowStatsView& stats, const GainFn& gain_fn, const LeafFn& leaf_fn,
                    const GrowthConfig& cfg, int num_threads);

}  // namespace utb
