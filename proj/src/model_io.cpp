#include "utb/model_io.hpp"

#include <fstream>
#include <json.hpp>

#include "utb/error.hpp"

namespace utb {

namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;

json node_to_json(const TreeNode& node) {
    json j;
    if (node.is_leaf()) {
        j["weights"] = node.weights;
    } else {
        j["feature"] = node.feature;
        j["threshold"] = node.threshold;
        j["nan_left"] = node.nan_left;
        j["left"] = node.left;
        j["right"] = node.right;
    }
    return j;
}

const json& field(const json& j, const char* name) {
    const auto it = j.find(name);
    if (it == j.end()) fail(ErrorKind::Parse, std::string("model file: missing field '") + name + "'");
    return *it;
}

template <typename T>
T get_as(const json& j, const char* name) {
    try {
        return field(j, name).get<T>();
    } catch (const json::exception&) {
        fail(ErrorKind::Parse, std::string("model file: field '") + name + "' has the wrong type");
    }
}

TreeNode node_from_json(const json& j) {
    TreeNode node;
    if (j.contains("weights")) {
        node.weights = get_as<std::vector<double>>(j, "weights");
    } else {
        node.feature = get_as<int>(j, "feature");
        node.threshold = get_as<double>(j, "threshold");
        node.nan_left = get_as<bool>(j, "nan_left");
        node.left = get_as<int>(j, "left");
        node.right = get_as<int>(j, "right");
    }
    return node;
}

void validate_tree(const UpliftTree& tree, int num_weights) {
    const int n = static_cast<int>(tree.nodes.size());
    if (n == 0) fail(ErrorKind::Parse, "model file: tree with no nodes");
    for (int i = 0; i < n; ++i) {
        const auto& node = tree.nodes[i];
        if (node.is_leaf()) {
            if (static_cast<int>(node.weights.size()) != num_weights)
                fail(ErrorKind::Parse, "model file: leaf weight vector has the wrong length");
        } else {
            // children always follow their parent, which also rules out cycles
            if (node.left <= i || node.left >= n || node.right <= i || node.right >= n)
                fail(ErrorKind::Parse, "model file: child index out of range");
            if (node.feature < 0) fail(ErrorKind::Parse, "model file: negative feature index");
        }
    }
}

}  // namespace

std::string model_to_json(const BoosterModel& model) {
    json j;
    j["format_version"] = kFormatVersion;
    j["booster_kind"] = to_string(model.kind);
    j["ensemble_mode"] = to_string(model.mode);
    j["loss"] = to_string(model.loss);
    j["num_arms"] = model.num_arms;
    j["shrinkage"] = model.shrinkage;
    j["seed"] = model.seed;
    j["feature_names"] = model.feature_names;
    j["config"] = {
        {"num_trees", model.num_trees},
        {"max_bins", model.max_bins},
        {"max_leaves", model.growth.max_leaves},
        {"max_depth", model.growth.max_depth},
        {"min_samples_leaf", model.growth.min_samples_leaf},
        {"min_samples_per_arm_leaf", model.growth.min_samples_per_arm_leaf},
        {"min_gain", model.growth.min_gain},
        {"lambda", model.growth.lambda},
    };
    json trees = json::array();
    for (const auto& tree : model.trees) {
        json nodes = json::array();
        for (const auto& node : tree.nodes) nodes.push_back(node_to_json(node));
        trees.push_back(json{{"nodes", std::move(nodes)}});
    }
    j["trees"] = std::move(trees);
    return j.dump(2) + "\n";
}

BoosterModel model_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        fail(ErrorKind::Parse, std::string("model file is not valid JSON: ") + e.what());
    }

    const int version = get_as<int>(j, "format_version");
    if (version != kFormatVersion)
        fail(ErrorKind::Unsupported, "unsupported model format_version " + std::to_string(version) +
                                         " (this build reads version " +
                                         std::to_string(kFormatVersion) + ")");

    BoosterModel model;
    model.kind = booster_kind_from(get_as<std::string>(j, "booster_kind"));
    model.mode = ensemble_mode_from(get_as<std::string>(j, "ensemble_mode"));
    model.loss = loss_kind_from(get_as<std::string>(j, "loss"));
    model.num_arms = get_as<int>(j, "num_arms");
    model.shrinkage = get_as<double>(j, "shrinkage");
    model.seed = get_as<uint64_t>(j, "seed");
    model.feature_names = get_as<std::vector<std::string>>(j, "feature_names");

    const json& cfg = field(j, "config");
    model.num_trees = get_as<int>(cfg, "num_trees");
    model.max_bins = get_as<int>(cfg, "max_bins");
    model.growth.max_leaves = get_as<int>(cfg, "max_leaves");
    model.growth.max_depth = get_as<int>(cfg, "max_depth");
    model.growth.min_samples_leaf = get_as<int>(cfg, "min_samples_leaf");
    model.growth.min_samples_per_arm_leaf = get_as<int>(cfg, "min_samples_per_arm_leaf");
    model.growth.min_gain = get_as<double>(cfg, "min_gain");
    model.growth.lambda = get_as<double>(cfg, "lambda");

    if (model.num_arms < 1) fail(ErrorKind::Parse, "model file: num_arms must be >= 1");
    const int num_weights = model.kind == BoosterKind::tddp ? 1 : model.num_arms + 1;

    const json& trees = field(j, "trees");
    if (!trees.is_array()) fail(ErrorKind::Parse, "model file: field 'trees' has the wrong type");
    for (const auto& jt : trees) {
        UpliftTree tree;
        const json& nodes = field(jt, "nodes");
        if (!nodes.is_array()) fail(ErrorKind::Parse, "model file: field 'nodes' has the wrong type");
        for (const auto& jn : nodes) tree.nodes.push_back(node_from_json(jn));
        validate_tree(tree, num_weights);
        model.trees.push_back(std::move(tree));
    }
    return model;
}

void save_model(const BoosterModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::Io, "cannot write '" + path + "'");
    out << model_to_json(model);
    if (!out) fail(ErrorKind::Io, "write failed for '" + path + "'");
}

BoosterModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Io, "cannot open '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return model_from_json(text);
}

}  // namespace utb
