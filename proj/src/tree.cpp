#include "utb/tree.hpp"

#include <cmath>

#include "utb/error.hpp"

namespace utb {

void GrowthConfig::validate() const {
    if (max_leaves < 1) fail(ErrorKind::Config, "max_leaves must be >= 1");
    if (max_depth < 0) fail(ErrorKind::Config, "max_depth must be >= 0");
    if (min_samples_leaf < 1) fail(ErrorKind::Config, "min_samples_leaf must be >= 1");
    if (min_samples_per_arm_leaf < 1) fail(ErrorKind::Config, "min_samples_per_arm_leaf must be >= 1");
    if (!(min_gain >= 0.0)) fail(ErrorKind::Config, "min_gain must be >= 0");
    if (!(lambda >= 0.0)) fail(ErrorKind::Config, "lambda must be >= 0");
}

int UpliftTree::num_leaves() const {
    int count = 0;
    for (const auto& node : nodes) count += node.is_leaf();
    return count;
}

int UpliftTree::route(std::span<const double> row) const {
    int idx = 0;
    while (!nodes[idx].is_leaf()) {
        const TreeNode& node = nodes[idx];
        const double x = row[node.feature];
        bool go_left;
        if (std::isnan(x))
            go_left = node.nan_left;
        else
            go_left = x <= node.threshold;
        idx = go_left ? node.left : node.right;
    }
    return idx;
}

}  // namespace utb
