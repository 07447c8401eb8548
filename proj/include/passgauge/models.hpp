#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "passgauge/forest.hpp"
#include "passgauge/logreg.hpp"

namespace passgauge::models {

enum class ModelFamily { RandomForest, LogisticRegression };

std::string to_string(ModelFamily family);
ModelFamily parse_family(const std::string& name);  // "rf" | "logreg"

struct ModelConfig {
    ModelFamily family = ModelFamily::RandomForest;
    ForestParams forest;
    LogRegParams logreg;

    bool operator==(const ModelConfig&) const = default;
};

// A trained classifier of either family.
class Classifier {
public:
    Classifier() = default;
    Classifier(RandomForestModel forest) : model_(std::move(forest)) {}
    Classifier(LogisticRegressionModel logreg) : model_(std::move(logreg)) {}

    ModelFamily family() const;
    std::size_t n_features() const;
    std::array<double, kClasses> predict_proba(std::span<const double> row) const;
    int predict_class(std::span<const double> row) const;

    const RandomForestModel* forest() const { return std::get_if<RandomForestModel>(&model_); }
    const LogisticRegressionModel* logreg() const { return std::get_if<LogisticRegressionModel>(&model_); }

private:
    std::variant<RandomForestModel, LogisticRegressionModel> model_;
};

Classifier train_classifier(const Matrix& features, std::span<const int> labels, const ModelConfig& config,
                            std::uint64_t seed, unsigned threads = 1);

// n_trees in {50, 100} x max_depth in {unlimited, 20}, or l2 in {1e-4, 1e-3}
// for logistic regression.
std::vector<ModelConfig> default_grid(ModelFamily family);

struct CvOptions {
    int folds = 5;
    // When nonzero, each training fold is SMOTE-balanced over its first
    // smote_numeric_cols columns before fitting; held-out folds never are.
    std::size_t smote_numeric_cols = 0;
    std::size_t smote_k = 5;
    unsigned threads = 1;
};

struct GridSearchResult {
    std::size_t best_index = 0;
    ModelConfig best;
    std::vector<double> mean_accuracy;  // one per grid cell
};

/// Stratified k-fold mean accuracy for every cell. The best cell has the
/// highest mean; ties prefer fewer trees, then a shallower depth, then the
/// earlier cell.
GridSearchResult grid_search_cv(const std::vector<ModelConfig>& grid, const Matrix& features,
                                std::span<const int> labels, std::uint64_t seed, const CvOptions& options = {});

}  // namespace passgauge::models
