#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "passgauge/tree.hpp"

namespace passgauge::models {

struct ForestParams {
    int n_trees = 100;
    int max_depth = 0;  // 0 = unlimited
    std::size_t min_samples_split = 2;
    bool bootstrap = true;
    std::size_t feature_subsample = 0;  // 0 = ceil(sqrt(d))

    bool operator==(const ForestParams&) const = default;
};

class RandomForestModel {
public:
    RandomForestModel() = default;
    RandomForestModel(std::vector<DecisionTree> trees, std::size_t n_features, ForestParams params,
                      std::uint64_t seed)
        : trees_(std::move(trees)), n_features_(n_features), params_(params), seed_(seed) {}

    const std::vector<DecisionTree>& trees() const { return trees_; }
    std::size_t n_features() const { return n_features_; }
    const ForestParams& params() const { return params_; }
    std::uint64_t seed() const { return seed_; }

    // Mean of the normalized leaf histograms. Throws DimensionMismatch.
    std::array<double, kClasses> predict_proba(std::span<const double> row) const;
    int predict_class(std::span<const double> row) const;

    // Sample-weighted Gini decrease per feature, summed over all trees and
    // normalized to sum to 1 (all zeros when no tree has a split).
    std::vector<double> feature_importance() const;

    bool operator==(const RandomForestModel&) const = default;

private:
    std::vector<DecisionTree> trees_;
    std::size_t n_features_ = 0;
    ForestParams params_;
    std::uint64_t seed_ = 0;
};

/// Tree t draws its bootstrap and feature subsets from Rng(master_seed, t),
/// so the ensemble does not depend on how trees are scheduled over threads.
RandomForestModel train_forest(const Matrix& features, std::span<const int> labels, const ForestParams& params,
                               std::uint64_t master_seed, unsigned threads = 1);

}  // namespace passgauge::models
