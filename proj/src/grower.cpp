#include "utb/grower.hpp"

#include <limits>
#include <memory>

#include "utb/error.hpp"

namespace utb {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct LeafState {
    int node_id = -1;
    int depth = 0;
    std::vector<uint32_t> positions;  // indices into the grow_tree `rows` span
    HistogramSet hist;

    double best_gain = kNegInf;
    int best_feature = -1;
    int best_bin = -1;
    bool best_nan_left = false;

    bool splittable() const { return best_feature >= 0; }
};

class Grower {
public:
    Grower(const BinnedDataset& data, std::span<const uint32_t> rows, const RowStatsView& stats,
           const GainFn& gain_fn, const LeafFn& leaf_fn, const GrowthConfig& cfg, int num_threads)
        : data_(data), rows_(rows), stats_(stats), gain_fn_(gain_fn), leaf_fn_(leaf_fn), cfg_(cfg),
          threads_(num_threads) {}

    GrownTree run() {
        GrownTree out;
        out.leaf_index.assign(rows_.size(), -1);

        auto root = std::make_unique<LeafState>();
        root->node_id = 0;
        root->depth = 0;
        root->positions.resize(rows_.size());
        for (uint32_t i = 0; i < rows_.size(); ++i) root->positions[i] = i;
        root->hist = build_histograms(data_, rows_, stats_, threads_);
        out.tree.nodes.emplace_back();

        int active = 1;
        if (active < cfg_.max_leaves) find_best(*root);
        frontier_.push_back(std::move(root));

        std::vector<uint32_t> scratch_ids;
        while (active < cfg_.max_leaves) {
            LeafState* victim = nullptr;
            for (auto& leaf : frontier_)  // creation order; strict > keeps the earliest on ties
                if (leaf && leaf->splittable() && (!victim || leaf->best_gain > victim->best_gain))
                    victim = leaf.get();
            if (!victim) break;
            const int victim_id = victim->node_id;
            split(*victim, out.tree, scratch_ids, active + 1 < cfg_.max_leaves);
            frontier_[victim_id].reset();  // frontier slot i always holds node id i
            ++active;
        }

        for (auto& leaf : frontier_) {
            if (!leaf) continue;
            TreeNode& node = out.tree.nodes[leaf->node_id];
            node.weights = leaf_fn_(leaf->hist.totals);
            for (const uint32_t pos : leaf->positions) out.leaf_index[pos] = leaf->node_id;
        }
        return out;
    }

private:
    // Best feasible candidate for one leaf, enumerated in tie-break order:
    // feature ascending, threshold bin ascending, NaN-right before NaN-left.
    void find_best(LeafState& leaf) {
        leaf.best_gain = kNegInf;
        leaf.best_feature = -1;
        if (cfg_.max_depth > 0 && leaf.depth >= cfg_.max_depth) return;
        const int w = leaf.hist.width;
        if (leaf.hist.totals[0] < 2.0 * cfg_.min_samples_leaf) return;

        std::vector<double> acc(w), left(w), right(w);
        for (int f = 0; f < data_.p; ++f) {
            const int non_nan_bins = static_cast<int>(data_.boundaries[f].size());
            if (non_nan_bins < 2) continue;
            const auto nan_stats = leaf.hist.bin(f, 0);
            const bool nan_present = nan_stats[0] > 0.0;

            std::fill(acc.begin(), acc.end(), 0.0);
            for (int t = 1; t < non_nan_bins; ++t) {
                const auto bin = leaf.hist.bin(f, t);
                for (int s = 0; s < w; ++s) acc[s] += bin[s];
                for (const bool nan_left : {false, true}) {
                    // An empty NaN bin makes both directions identical and the
                    // tie-break prefers nan_left=false.
                    if (nan_left && !nan_present) continue;
                    for (int s = 0; s < w; ++s) {
                        left[s] = nan_left ? acc[s] + nan_stats[s] : acc[s];
                        right[s] = leaf.hist.totals[s] - left[s];
                    }
                    if (left[0] < cfg_.min_samples_leaf || right[0] < cfg_.min_samples_leaf)
                        continue;
                    const auto gain = gain_fn_(left, right);
                    if (!gain) continue;
                    if (*gain > cfg_.min_gain && *gain > leaf.best_gain) {
                        leaf.best_gain = *gain;
                        leaf.best_feature = f;
                        leaf.best_bin = t;
                        leaf.best_nan_left = nan_left;
                    }
                }
            }
        }
    }

    void split(LeafState& parent, UpliftTree& tree, std::vector<uint32_t>& scratch_ids,
               bool search_children) {
        const int f = parent.best_feature;
        const int t = parent.best_bin;
        const bool nan_left = parent.best_nan_left;

        auto left = std::make_unique<LeafState>();
        auto right = std::make_unique<LeafState>();
        left->node_id = static_cast<int>(tree.nodes.size());
        right->node_id = left->node_id + 1;
        left->depth = right->depth = parent.depth + 1;

        const uint16_t* col = data_.bins[f].data();
        for (const uint32_t pos : parent.positions) {
            const uint16_t b = col[rows_[pos]];
            const bool go_left = b == 0 ? nan_left : b <= t;
            (go_left ? left : right)->positions.push_back(pos);
        }
        parent.positions.clear();
        parent.positions.shrink_to_fit();

        // Build the smaller child's histogram directly; the sibling follows by
        // subtraction from the parent, whose buffers are recycled.
        LeafState* small = left->positions.size() <= right->positions.size() ? left.get() : right.get();
        LeafState* big = small == left.get() ? right.get() : left.get();
        scratch_ids.clear();
        for (const uint32_t pos : small->positions) scratch_ids.push_back(rows_[pos]);
        small->hist = build_histograms(data_, scratch_ids, stats_, threads_);
        big->hist = std::move(parent.hist);
        big->hist.subtract(small->hist);

        TreeNode& node = tree.nodes[parent.node_id];
        node.feature = f;
        node.threshold_bin = t;
        node.threshold = data_.boundaries[f][t - 1];
        node.nan_left = nan_left;
        node.left = left->node_id;
        node.right = right->node_id;
        tree.nodes.emplace_back();
        tree.nodes.emplace_back();

        if (search_children) {
            find_best(*left);
            find_best(*right);
        }
        frontier_.push_back(std::move(left));
        frontier_.push_back(std::move(right));
    }

    const BinnedDataset& data_;
    std::span<const uint32_t> rows_;
    const RowStatsView& stats_;
    const GainFn& gain_fn_;
    const LeafFn& leaf_fn_;
    const GrowthConfig& cfg_;
    const int threads_;
    std::vector<std::unique_ptr<LeafState>> frontier_;
};

}  // namespace

GrownTree grow_tree(const BinnedDataset& data, std::span<const uint32_t> rows,
                    const RowStatsView& stats, const GainFn& gain_fn, const LeafFn& leaf_fn,
                    const GrowthConfig& cfg, int num_threads) {
    cfg.validate();
    if (rows.empty()) fail(ErrorKind::Validation, "cannot grow a tree from an empty row set");
    Grower grower(data, rows, stats, gain_fn, leaf_fn, cfg, num_threads);
    return grower.run();
}

}  // namespace utb
