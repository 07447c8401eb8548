#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "passgauge/matrix.hpp"
#include "passgauge/rng.hpp"

namespace passgauge::models {

inline constexpr int kClasses = 3;

// G = 1 - sum (n_c / N)^2. Throws Error(AllZeroCounts) when N == 0.
double gini_impurity(std::span<const double> class_counts);
double gini_impurity(const std::array<std::uint32_t, kClasses>& class_counts);

// Index of the largest value; ties go to the lower index (the weaker class).
int argmax_low(std::span<const double> values);

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;   // rows with value <= threshold
    int right = -1;
    std::array<std::uint32_t, kClasses> histogram{};  // training samples reaching this node

    bool is_leaf() const { return feature < 0; }
    bool operator==(const TreeNode&) const = default;
};

struct TreeParams {
    std::size_t feature_subsample = 0;  // 0 = all features
    int max_depth = 0;                  // 0 = unlimited
    std::size_t min_samples_split = 2;
};

class DecisionTree {
public:
    DecisionTree() = default;
    explicit DecisionTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {}

    const std::vector<TreeNode>& nodes() const { return nodes_; }
    const TreeNode& leaf_for(std::span<const double> row) const;
    std::size_t depth() const;

    bool operator==(const DecisionTree&) const = default;

private:
    std::vector<TreeNode> nodes_;
};

/// CART on the rows listed in `samples` (repeats allowed, e.g. a bootstrap).
/// At each node up to feature_subsample non-constant features are drawn
/// without replacement; thresholds are midpoints between consecutive distinct
/// values and the split with the lowest weighted child Gini wins, ties going
/// to the lowest feature id then the lowest threshold.
DecisionTree train_tree(const Matrix& features, std::span<const int> labels, std::span<const std::size_t> samples,
                        const TreeParams& params, Rng& rng);

}  // namespace passgauge::models
