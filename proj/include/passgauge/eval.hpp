#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "passgauge/matrix.hpp"

namespace passgauge::eval {

inline constexpr int kClasses = 3;

// Rows are the true class, columns the predicted class.
struct ConfusionMatrix {
    std::array<std::array<std::size_t, kClasses>, kClasses> cells{};

    std::size_t total() const;
    bool operator==(const ConfusionMatrix&) const = default;
};

ConfusionMatrix confusion_matrix(std::span<const int> truth, std::span<const int> predicted);

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t support = 0;

    bool operator==(const ClassMetrics&) const = default;
};

struct MetricsReport {
    double accuracy = 0.0;
    std::array<ClassMetrics, kClasses> per_class{};
    ClassMetrics weighted{};  // support = total

    bool operator==(const MetricsReport&) const = default;
};

// Zero denominators give 0 rather than NaN. Throws Error(EmptyMatrix).
MetricsReport classification_metrics(const ConfusionMatrix& cm);

// Variant for an arbitrary number of classes (row = truth), used where the
// class set is not {weak, medium, strong}.
MetricsReport classification_metrics(const std::vector<std::vector<std::size_t>>& cm);

inline constexpr double kPerfectSeparation = std::numeric_limits<double>::infinity();

struct FeatureScore {
    std::string name;
    double f_value = 0.0;  // +inf when classes are perfectly separated
};

struct FeatureRanking {
    std::vector<FeatureScore> scores;  // descending F; ties keep column order

    bool operator==(const FeatureRanking&) const;
};

// One-way ANOVA F statistic per column. Needs >= 2 classes each with >= 2
// samples (Error(InsufficientClassSize)).
std::vector<double> anova_f_values(const Matrix& features, std::span<const int> labels);
FeatureRanking anova_f_scores(const Matrix& features, std::span<const int> labels,
                              std::span<const std::string> names);

// Canonical (key-sorted) JSON; doubles use shortest round-trip formatting.
std::string metrics_to_json(const MetricsReport& metrics, const ConfusionMatrix& cm);
MetricsReport metrics_from_json(std::string_view json);
std::string confusion_to_csv(const ConfusionMatrix& cm);
ConfusionMatrix confusion_from_csv(std::string_view csv);
std::string ranking_to_csv(const FeatureRanking& ranking);
FeatureRanking ranking_from_csv(std::string_view csv);

// Writes metrics.json, confusion.csv and feature_ranking.csv into dir.
// Throws Error(IoError).
void emit_report(const MetricsReport& metrics, const ConfusionMatrix& cm, const FeatureRanking& ranking,
                 const std::filesystem::path& dir);

}  // namespace passgauge::eval
