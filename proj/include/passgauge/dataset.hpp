#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "passgauge/matrix.hpp"

namespace passgauge::dataset {

inline constexpr int kNumClasses = 3;
inline constexpr std::array<std::string_view, kNumClasses> kLabelNames = {"weak", "medium", "strong"};

struct PasswordRecord {
    std::string password;  // raw UTF-8 bytes, never empty
    int label = 0;         // 0 weak, 1 medium, 2 strong

    bool operator==(const PasswordRecord&) const = default;
};

struct IngestReport {
    std::size_t rows_read = 0;
    std::size_t duplicates_removed = 0;
    std::size_t nulls_removed = 0;
    std::size_t malformed_skipped = 0;
    std::size_t rows_kept = 0;
    // Same password seen with more than one label; both rows are kept.
    std::size_t label_conflicts = 0;
    std::array<std::size_t, kNumClasses> class_histogram{};
};

struct Dataset {
    std::vector<PasswordRecord> records;
    IngestReport report;
};

// RFC-4180 CSV with header "password,strength".
Dataset parse_csv(std::string_view text);
Dataset load_csv(const std::filesystem::path& path);

// FNV-1a 64 over the raw file bytes, hex encoded.
std::string content_hash(std::string_view bytes);
std::string file_hash(const std::filesystem::path& path);

struct SplitFractions {
    double train = 0.70;
    double validation = 0.10;
    double test = 0.20;
};

struct DatasetSplit {
    std::vector<std::size_t> train;
    std::vector<std::size_t> validation;
    std::vector<std::size_t> test;
    std::uint64_t seed = 0;
};

// Per-class seeded shuffle, then largest-remainder partition. Ids within
// each part are ascending.
DatasetSplit stratified_split(std::span<const int> labels, SplitFractions fractions, std::uint64_t seed);

// Fold id (0..folds-1) per sample; each class is dealt round-robin after a
// seeded shuffle.
std::vector<int> stratified_folds(std::span<const int> labels, int folds, std::uint64_t seed);

struct Augmented {
    Matrix features;
    std::vector<int> labels;
    std::size_t synthetic = 0;
};

/// Oversamples every class up to the majority count. Synthetic rows are
/// x + u * (neighbor - x) over the first `numeric_cols` columns, with the
/// neighbor drawn from the k nearest same-class rows (Euclidean on those
/// columns); remaining columns are copied from x. Originals come first and
/// are untouched. Must only ever see training rows.
Augmented smote_balance(const Matrix& features, std::span<const int> labels, std::size_t numeric_cols,
                        std::size_t k, std::uint64_t seed);

struct ScalerParams {
    std::vector<double> mean;
    std::vector<double> stddev;  // population
    std::vector<bool> constant;  // scaled output forced to 0

    std::size_t size() const { return mean.size(); }
    bool operator==(const ScalerParams&) const = default;
};

// z-score statistics over the first `cols` columns.
ScalerParams fit_scaler(const Matrix& features, std::size_t cols);
// Scales the leading params.size() entries in place; the rest pass through.
void apply_scaler(std::span<double> row, const ScalerParams& params);
void apply_scaler(Matrix& features, const ScalerParams& params);

}  // namespace passgauge::dataset
