#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "passgauge/dataset.hpp"
#include "passgauge/eval.hpp"
#include "passgauge/featurex.hpp"
#include "passgauge/models.hpp"
#include "passgauge/ngrams.hpp"

namespace passgauge {

inline constexpr int kSchemaVersion = 1;

struct TrainingConfig {
    models::ModelConfig model;
    std::size_t ngram_max_features = ngrams::kDefaultMaxFeatures;
    std::uint64_t seed = 42;
    bool grid_search = false;
    int cv_folds = 5;
    std::size_t smote_k = 5;
    dataset::SplitFractions fractions;
    unsigned threads = 1;
};

nlohmann::json config_to_json(const TrainingConfig& config);

/// Everything needed to score a password, frozen after training.
struct TrainedPipeline {
    int schema_version = kSchemaVersion;
    ngrams::NgramVocabulary vocabulary;
    dataset::ScalerParams scaler;
    featurex::BreachedDictionary dictionary;
    models::Classifier model;
    std::vector<std::string> label_names = {"weak", "medium", "strong"};
    // seed, data_hash, trained_at, config, ingest counts, split sizes,
    // validation accuracy, grid search table.
    nlohmann::json metadata = nlohmann::json::object();

    std::size_t n_features() const { return featurex::kNumericFeatureCount + vocabulary.size(); }
};

// Scaled numeric block followed by the dense TF-IDF block.
std::vector<double> featurize(const TrainedPipeline& pipeline, std::u32string_view pw);

// Unscaled hand-engineered features for a set of records, one row each.
Matrix numeric_feature_matrix(const std::vector<dataset::PasswordRecord>& records,
                              const featurex::BreachedDictionary& dict);
std::vector<std::string> numeric_feature_names();

struct TrainingOutcome {
    TrainedPipeline pipeline;
    dataset::DatasetSplit split;
    std::size_t synthetic_samples = 0;
};

/// split -> vocabulary on train -> features -> scaler on train -> scale ->
/// SMOTE on the scaled training rows -> (optional grid search) -> fit.
/// Validation and test rows are never read while fitting.
TrainingOutcome train_pipeline(const std::vector<dataset::PasswordRecord>& records, const TrainingConfig& config,
                               const featurex::BreachedDictionary& dict, const std::string& data_hash = {});

struct Evaluation {
    std::string subset;  // "test" or "all"
    std::size_t samples = 0;
    eval::ConfusionMatrix confusion;
    eval::MetricsReport metrics;
    eval::FeatureRanking ranking;
};

/// Evaluates on the held-out test split when data_hash matches the hash the
/// pipeline was trained on (the split is recomputed from the stored seed),
/// otherwise on every record.
Evaluation evaluate_pipeline(const TrainedPipeline& pipeline, const std::vector<dataset::PasswordRecord>& records,
                             const std::string& data_hash);

std::string serialize_pipeline(const TrainedPipeline& pipeline);
TrainedPipeline deserialize_pipeline(std::string_view archive);
void save_pipeline(const TrainedPipeline& pipeline, const std::filesystem::path& path);
TrainedPipeline load_pipeline(const std::filesystem::path& path);

}  // namespace passgauge
