#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lcmine {

struct ForestConfig {
    std::size_t mtry = 4;
    std::size_t ntree = 500;
    std::uint64_t seed = 0;
    std::size_t min_leaf = 1;
    std::optional<std::size_t> max_depth;
};

// CART node. Internal nodes route x[feature] <= threshold to the left
// child; leaves carry in-bag class counts.
struct TreeNode {
    int feature = -1;           // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    std::vector<std::size_t> class_counts; // leaves only
};

struct DecisionTree {
    std::vector<TreeNode> nodes; // node 0 is the root
    std::vector<std::size_t> bootstrap_indices;
    std::vector<std::size_t> oob_indices;

    /// Leaf majority class id, ties to the smallest class id.
    std::size_t predict(const std::vector<int>& row) const;
    bool uses_feature(std::size_t feature) const;
};

using FeatureMatrix = std::vector<std::vector<int>>; // n rows x d columns

struct ForestModel {
    ForestConfig config;
    std::vector<DecisionTree> trees;
    std::vector<int> class_codes;             // sorted distinct training labels
    std::size_t n_features = 0;
    double oob_error = 0.0;
    std::map<int, double> per_class_error;    // label code -> OOB error rate
    std::vector<std::vector<std::size_t>> confusion; // true class x predicted class, OOB
    std::vector<int> oob_predictions;         // label code per record, -1 if never OOB

    std::size_t class_id(int code) const;
};

struct Prediction {
    int label = 0;
    std::vector<double> vote_fractions; // aligned with class_codes
};

// Bootstrap-aggregated CART with Gini splits over mtry sampled features.
// Per-tree seeded random streams keep results independent of tree
// scheduling.
ForestModel train_forest(const FeatureMatrix& features, const std::vector<int>& labels,
                         const ForestConfig& config);

/// Majority vote over all trees, ties to the smallest label code.
Prediction predict(const ForestModel& model, const std::vector<int>& row);

struct ImportanceReport {
    std::vector<double> mdeca;        // per feature, mean decrease in accuracy x 100
    std::vector<std::size_t> ranking; // feature indices sorted by mdeca descending
};

// Permutation importance: per tree and feature, OOB accuracy before vs
// after shuffling the feature among that tree's OOB records, averaged over
// `repeats` seeded permutations.
ImportanceReport permutation_importance(const ForestModel& model, const FeatureMatrix& features,
                                        const std::vector<int>& labels,
                                        std::size_t repeats = 5, std::uint64_t seed = 0);

std::map<int, double> per_class_errors(const ForestModel& model);

} // namespace lcmine
