#pragma once
#include <cstdint>
#include <span>
#include <vector>

namespace utb {

struct GrowthConfig {
    int max_leaves = 31;
    int max_depth = 0;                 // 0 = unlimited
    int min_samples_leaf = 20;
    int min_samples_per_arm_leaf = 5;
    double min_gain = 0.0;             // a split is taken only when gain > min_gain
    double lambda = 0.0;               // L2 added to hessian-sum denominators

    void validate() const;
};

// Binary tree over binned features. Internal nodes route by
// "x <= threshold goes left" on the raw feature value (threshold is the real
// upper edge of threshold_bin, so no re-binning is needed at predict time);
// NaN routes per nan_left. Leaves carry a weight vector whose meaning belongs
// to the booster that grew the tree.
struct TreeNode {
    int left = -1;   // -1 marks a leaf
    int right = -1;
    int feature = -1;
    int threshold_bin = -1;
    double threshold = 0.0;
    bool nan_left = false;
    std::vector<double> weights;

    bool is_leaf() const { return left < 0; }
};

struct UpliftTree {
    std::vector<TreeNode> nodes;

    int num_leaves() const;
    // Index of the leaf node a raw feature row routes to.
    int route(std::span<const double> row) const;
    const std::vector<double>& leaf_weights_at(std::span<const double> row) const {
        return nodes[route(row)].weights;
    }
};

}  // namespace utb
