#include "passgauge/forest.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "passgauge/error.hpp"

namespace passgauge::models {

std::array<double, kClasses> RandomForestModel::predict_proba(std::span<const double> row) const {
    if (row.size() != n_features_) {
        throw Error(ErrorKind::DimensionMismatch, "expected " + std::to_string(n_features_) + " features, got " +
                                                      std::to_string(row.size()));
    }
    std::array<double, kClasses> proba{};
    for (const auto& tree : trees_) {
        const auto& hist = tree.leaf_for(row).histogram;
        const double total = static_cast<double>(hist[0]) + hist[1] + hist[2];
        for (int c = 0; c < kClasses; ++c) proba[c] += hist[c] / total;
    }
    const double n = static_cast<double>(trees_.size());
    for (double& p : proba) p /= n;
    return proba;
}

int RandomForestModel::predict_class(std::span<const double> row) const {
    const auto proba = predict_proba(row);
    return argmax_low(proba);
}

std::vector<double> RandomForestModel::feature_importance() const {
    std::vector<double> importance(n_features_, 0.0);
    for (const auto& tree : trees_) {
        const auto& nodes = tree.nodes();
        for (const auto& node : nodes) {
            if (node.is_leaf()) continue;
            const auto weighted = [](const TreeNode& n) {
                const double total = static_cast<double>(n.histogram[0]) + n.histogram[1] + n.histogram[2];
                return total * gini_impurity(n.histogram);
            };
            importance[node.feature] +=
                weighted(node) - weighted(nodes[node.left]) - weighted(nodes[node.right]);
        }
    }
    double total = 0.0;
    for (double& v : importance) {
        v = std::max(v, 0.0);
        total += v;
    }
    if (total > 0.0) {
        for (double& v : importance) v /= total;
    }
    return importance;
}

RandomForestModel train_forest(const Matrix& features, std::span<const int> labels, const ForestParams& params,
                               std::uint64_t master_seed, unsigned threads) {
    if (features.rows() != labels.size()) throw Error(ErrorKind::LengthMismatch, "rows and labels differ");
    if (features.rows() < 2) throw Error(ErrorKind::EmptyTrainingSet, "a forest needs at least 2 samples");
    if (params.n_trees < 1) throw Error(ErrorKind::InvalidArgument, "n_trees must be >= 1");
    std::array<bool, kClasses> seen{};
    for (int y : labels) {
        if (y < 0 || y >= kClasses) throw Error(ErrorKind::InvalidLabel, "label out of range");
        seen[y] = true;
    }
    if (std::count(seen.begin(), seen.end(), true) < 2) {
        throw Error(ErrorKind::SingleClassTrainingSet, "training data contains a single class");
    }

    TreeParams tree_params;
    tree_params.max_depth = params.max_depth;
    tree_params.min_samples_split = params.min_samples_split;
    tree_params.feature_subsample =
        params.feature_subsample != 0
            ? params.feature_subsample
            : static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(features.cols()))));

    const std::size_t n = features.rows();
    std::vector<DecisionTree> trees(static_cast<std::size_t>(params.n_trees));
    auto train_one = [&](std::size_t t) {
        Rng rng(master_seed, t);
        std::vector<std::size_t> samples(n);
        for (std::size_t i = 0; i < n; ++i) samples[i] = params.bootstrap ? rng.below(n) : i;
        trees[t] = train_tree(features, labels, samples, tree_params, rng);
    };

    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(trees.size())));
    if (threads == 1) {
        for (std::size_t t = 0; t < trees.size(); ++t) train_one(t);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::thread> workers;
        for (unsigned w = 0; w < threads; ++w) {
            workers.emplace_back([&] {
                for (std::size_t t = next++; t < trees.size(); t = next++) {
                    try {
                        train_one(t);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                    }
                }
            });
        }
        for (auto& w : workers) w.join();
        if (failure) std::rethrow_exception(failure);
    }
    return RandomForestModel(std::move(trees), features.cols(), params, master_seed);
}

}  // namespace passgauge::models
