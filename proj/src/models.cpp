#include "passgauge/models.hpp"

#include <limits>

#include "passgauge/dataset.hpp"
#include "passgauge/error.hpp"

namespace passgauge::models {

std::string to_string(ModelFamily family) {
    return family == ModelFamily::RandomForest ? "rf" : "logreg";
}

ModelFamily parse_family(const std::string& name) {
    if (name == "rf") return ModelFamily::RandomForest;
    if (name == "logreg") return ModelFamily::LogisticRegression;
    throw Error(ErrorKind::InvalidArgument, "unknown model family '" + name + "'");
}

ModelFamily Classifier::family() const {
    return forest() ? ModelFamily::RandomForest : ModelFamily::LogisticRegression;
}

std::size_t Classifier::n_features() const {
    return std::visit([](const auto& m) { return m.n_features(); }, model_);
}

std::array<double, kClasses> Classifier::predict_proba(std::span<const double> row) const {
    return std::visit([&](const auto& m) { return m.predict_proba(row); }, model_);
}

int Classifier::predict_class(std::span<const double> row) const {
    return std::visit([&](const auto& m) { return m.predict_class(row); }, model_);
}

Classifier train_classifier(const Matrix& features, std::span<const int> labels, const ModelConfig& config,
                            std::uint64_t seed, unsigned threads) {
    if (config.family == ModelFamily::RandomForest) {
        return train_forest(features, labels, config.forest, seed, threads);
    }
    return train_logreg(features, labels, config.logreg);
}

std::vector<ModelConfig> default_grid(ModelFamily family) {
    std::vector<ModelConfig> grid;
    if (family == ModelFamily::RandomForest) {
        for (int trees : {50, 100}) {
            for (int depth : {0, 20}) {
                ModelConfig cell;
                cell.forest.n_trees = trees;
                cell.forest.max_depth = depth;
                grid.push_back(cell);
            }
        }
    } else {
        for (double l2 : {1e-4, 1e-3}) {
            ModelConfig cell;
            cell.family = ModelFamily::LogisticRegression;
            cell.logreg.l2 = l2;
            grid.push_back(cell);
        }
    }
    return grid;
}

namespace {

// Smaller-model ordering used to break accuracy ties.
bool smaller_model(const ModelConfig& a, const ModelConfig& b) {
    if (a.family != ModelFamily::RandomForest || b.family != ModelFamily::RandomForest) return false;
    if (a.forest.n_trees != b.forest.n_trees) return a.forest.n_trees < b.forest.n_trees;
    const auto depth = [](int d) { return d == 0 ? std::numeric_limits<int>::max() : d; };
    return depth(a.forest.max_depth) < depth(b.forest.max_depth);
}

}  // namespace

GridSearchResult grid_search_cv(const std::vector<ModelConfig>& grid, const Matrix& features,
                                std::span<const int> labels, std::uint64_t seed, const CvOptions& options) {
    if (grid.empty()) throw Error(ErrorKind::InvalidArgument, "empty parameter grid");
    if (features.rows() != labels.size()) throw Error(ErrorKind::LengthMismatch, "rows and labels differ");
    const auto fold = dataset::stratified_folds(labels, options.folds, seed);

    GridSearchResult result;
    result.mean_accuracy.assign(grid.size(), 0.0);
    for (int k = 0; k < options.folds; ++k) {
        std::vector<std::size_t> train_ids;
        std::vector<std::size_t> held_ids;
        for (std::size_t i = 0; i < fold.size(); ++i) (fold[i] == k ? held_ids : train_ids).push_back(i);

        Matrix x_train = features.select_rows(train_ids);
        std::vector<int> y_train;
        for (std::size_t i : train_ids) y_train.push_back(labels[i]);
        if (options.smote_numeric_cols > 0) {
            auto balanced = dataset::smote_balance(x_train, y_train, options.smote_numeric_cols, options.smote_k,
                                                   derive_seed(seed, 7000 + static_cast<std::uint64_t>(k)));
            x_train = std::move(balanced.features);
            y_train = std::move(balanced.labels);
        }

        for (std::size_t g = 0; g < grid.size(); ++g) {
            const Classifier model =
                train_classifier(x_train, y_train, grid[g], derive_seed(seed, static_cast<std::uint64_t>(k)),
                                 options.threads);
            std::size_t correct = 0;
            for (std::size_t i : held_ids) correct += model.predict_class(features.row(i)) == labels[i];
            result.mean_accuracy[g] +=
                static_cast<double>(correct) / static_cast<double>(held_ids.size()) / options.folds;
        }
    }

    for (std::size_t g = 1; g < grid.size(); ++g) {
        const double best = result.mean_accuracy[result.best_index];
        const double cur = result.mean_accuracy[g];
        if (cur > best || (cur == best && smaller_model(grid[g], grid[result.best_index]))) {
            result.best_index = g;
        }
    }
    result.best = grid[result.best_index];
    return result;
}

}  // namespace passgauge::models
