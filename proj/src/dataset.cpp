#include "passgauge/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <utility>

#include "passgauge/error.hpp"
#include "passgauge/rng.hpp"

namespace passgauge::dataset {

namespace {

struct CsvRow {
    std::vector<std::string> fields;
    bool well_formed = true;
};

// Reads one RFC-4180 record starting at pos; advances pos past the line end.
CsvRow read_row(std::string_view text, std::size_t& pos) {
    CsvRow row;
    std::string field;
    bool in_quotes = false;
    bool quoted = false;
    while (pos < text.size()) {
        const char c = text[pos];
        if (in_quotes) {
            if (c == '"') {
                if (pos + 1 < text.size() && text[pos + 1] == '"') {
                    field.push_back('"');
                    pos += 2;
                    continue;
                }
                in_quotes = false;
            } else {
                field.push_back(c);
            }
            ++pos;
            continue;
        }
        if (c == '"') {
            // A quote is only legal at the start of a field.
            if (!field.empty() || quoted) row.well_formed = false;
            in_quotes = quoted = true;
        } else if (c == ',') {
            row.fields.push_back(std::move(field));
            field.clear();
            quoted = false;
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && pos + 1 < text.size() && text[pos + 1] == '\n') ++pos;
            ++pos;
            row.fields.push_back(std::move(field));
            return row;
        } else {
            if (quoted) row.well_formed = false;
            field.push_back(c);
        }
        ++pos;
    }
    if (in_quotes) row.well_formed = false;
    row.fields.push_back(std::move(field));
    return row;
}

bool is_blank(const CsvRow& row) { return row.fields.size() == 1 && row.fields[0].empty(); }

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::FileNotFound, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void check_class_sizes(std::span<const int> labels, std::size_t minimum) {
    std::array<std::size_t, kNumClasses> counts{};
    for (int y : labels) {
        if (y < 0 || y >= kNumClasses) throw Error(ErrorKind::InvalidLabel, "label out of range");
        ++counts[y];
    }
    for (int c = 0; c < kNumClasses; ++c) {
        if (counts[c] > 0 && counts[c] < minimum) {
            throw Error(ErrorKind::InsufficientClassSize,
                        "class " + std::to_string(c) + " has " + std::to_string(counts[c]) +
                            " records, need " + std::to_string(minimum));
        }
    }
}

}  // namespace

Dataset parse_csv(std::string_view text) {
    if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
    std::size_t pos = 0;
    const CsvRow header = read_row(text, pos);
    if (header.fields != std::vector<std::string>{"password", "strength"}) {
        throw Error(ErrorKind::HeaderMismatch, "expected header 'password,strength'");
    }

    Dataset out;
    IngestReport& report = out.report;
    std::set<std::pair<std::string, int>> seen;
    std::map<std::string, int> first_label;
    std::set<std::string> conflicted;
    while (pos < text.size()) {
        const CsvRow row = read_row(text, pos);
        if (is_blank(row)) continue;
        ++report.rows_read;
        if (!row.well_formed || row.fields.size() != 2) {
            ++report.malformed_skipped;
            continue;
        }
        const std::string& password = row.fields[0];
        const std::string& label_text = row.fields[1];
        if (password.empty()) {
            ++report.nulls_removed;
            continue;
        }
        if (label_text.size() != 1 || label_text[0] < '0' || label_text[0] > '2') {
            ++report.malformed_skipped;
            continue;
        }
        const int label = label_text[0] - '0';
        if (!seen.emplace(password, label).second) {
            ++report.duplicates_removed;
            continue;
        }
        const auto [it, inserted] = first_label.emplace(password, label);
        if (!inserted && conflicted.insert(password).second) ++report.label_conflicts;
        ++report.class_histogram[label];
        out.records.push_back({password, label});
    }
    report.rows_kept = out.records.size();
    return out;
}

Dataset load_csv(const std::filesystem::path& path) { return parse_csv(read_file(path)); }

std::string content_hash(std::string_view bytes) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 0x100000001B3ULL;
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i, h >>= 4) out[i] = kHex[h & 0xF];
    return out;
}

std::string file_hash(const std::filesystem::path& path) { return content_hash(read_file(path)); }

DatasetSplit stratified_split(std::span<const int> labels, SplitFractions fractions, std::uint64_t seed) {
    const double sum = fractions.train + fractions.validation + fractions.test;
    if (std::abs(sum - 1.0) > 1e-9 || fractions.train < 0 || fractions.validation < 0 || fractions.test < 0) {
        throw Error(ErrorKind::InvalidArgument, "split fractions must be nonnegative and sum to 1");
    }
    check_class_sizes(labels, 3);

    DatasetSplit split;
    split.seed = seed;
    const std::array<double, 3> f = {fractions.train, fractions.validation, fractions.test};
    std::array<std::vector<std::size_t>*, 3> parts = {&split.train, &split.validation, &split.test};

    for (int c = 0; c < kNumClasses; ++c) {
        std::vector<std::size_t> ids;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (labels[i] == c) ids.push_back(i);
        }
        if (ids.empty()) continue;
        Rng rng(seed, static_cast<std::uint64_t>(c));
        rng.shuffle(ids.begin(), ids.end());

        const double n = static_cast<double>(ids.size());
        std::array<std::size_t, 3> take{};
        std::array<double, 3> remainder{};
        std::size_t assigned = 0;
        for (int s = 0; s < 3; ++s) {
            const double exact = n * f[s];
            take[s] = static_cast<std::size_t>(std::floor(exact + 1e-9));
            remainder[s] = exact - static_cast<double>(take[s]);
            assigned += take[s];
        }
        std::array<int, 3> order = {0, 1, 2};
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return remainder[a] > remainder[b]; });
        for (std::size_t r = 0; assigned < ids.size(); ++r, ++assigned) ++take[order[r % 3]];

        std::size_t offset = 0;
        for (int s = 0; s < 3; ++s) {
            parts[s]->insert(parts[s]->end(), ids.begin() + offset, ids.begin() + offset + take[s]);
            offset += take[s];
        }
    }
    for (auto* part : parts) std::sort(part->begin(), part->end());
    return split;
}

std::vector<int> stratified_folds(std::span<const int> labels, int folds, std::uint64_t seed) {
    if (folds < 2) throw Error(ErrorKind::InvalidArgument, "need at least 2 folds");
    check_class_sizes(labels, static_cast<std::size_t>(folds));
    std::vector<int> fold(labels.size(), 0);
    for (int c = 0; c < kNumClasses; ++c) {
        std::vector<std::size_t> ids;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (labels[i] == c) ids.push_back(i);
        }
        Rng rng(seed, 1000 + static_cast<std::uint64_t>(c));
        rng.shuffle(ids.begin(), ids.end());
        for (std::size_t j = 0; j < ids.size(); ++j) fold[ids[j]] = static_cast<int>(j % folds);
    }
    return fold;
}

Augmented smote_balance(const Matrix& features, std::span<const int> labels, std::size_t numeric_cols,
                        std::size_t k, std::uint64_t seed) {
    if (features.rows() != labels.size()) {
        throw Error(ErrorKind::LengthMismatch, "feature rows and labels differ in length");
    }
    if (numeric_cols > features.cols()) {
        throw Error(ErrorKind::DimensionMismatch, "numeric block wider than the feature matrix");
    }
    std::array<std::vector<std::size_t>, kNumClasses> members;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] < 0 || labels[i] >= kNumClasses) throw Error(ErrorKind::InvalidLabel, "label out of range");
        members[labels[i]].push_back(i);
    }
    std::size_t majority = 0;
    for (const auto& m : members) majority = std::max(majority, m.size());

    Augmented out{features, std::vector<int>(labels.begin(), labels.end()), 0};
    std::vector<double> synthetic(features.cols());
    for (int c = 0; c < kNumClasses; ++c) {
        const auto& ids = members[c];
        if (ids.empty() || ids.size() == majority) continue;
        if (ids.size() < 2) {
            throw Error(ErrorKind::DegenerateClass,
                        "class " + std::to_string(c) + " has a single sample and no neighbor");
        }
        const std::size_t kk = std::max<std::size_t>(1, std::min(k, ids.size() - 1));

        // k nearest same-class neighbors of every member; ties by row order.
        std::vector<std::vector<std::size_t>> neighbors(ids.size());
        std::vector<std::pair<double, std::size_t>> dist(ids.size());
        for (std::size_t a = 0; a < ids.size(); ++a) {
            const auto xa = features.row(ids[a]);
            for (std::size_t b = 0; b < ids.size(); ++b) {
                const auto xb = features.row(ids[b]);
                double d = 0.0;
                for (std::size_t j = 0; j < numeric_cols; ++j) d += (xa[j] - xb[j]) * (xa[j] - xb[j]);
                dist[b] = {a == b ? INFINITY : d, b};
            }
            std::partial_sort(dist.begin(), dist.begin() + static_cast<long>(kk), dist.end());
            for (std::size_t j = 0; j < kk; ++j) neighbors[a].push_back(ids[dist[j].second]);
        }

        Rng rng(seed, static_cast<std::uint64_t>(c));
        for (std::size_t made = ids.size(); made < majority; ++made) {
            const std::size_t base = rng.below(ids.size());
            const std::size_t nn = neighbors[base][rng.below(kk)];
            const double u = rng.uniform();
            const auto x = features.row(ids[base]);
            const auto y = features.row(nn);
            std::copy(x.begin(), x.end(), synthetic.begin());
            for (std::size_t j = 0; j < numeric_cols; ++j) synthetic[j] = x[j] + u * (y[j] - x[j]);
            out.features.append_row(synthetic);
            out.labels.push_back(c);
            ++out.synthetic;
        }
    }
    return out;
}

ScalerParams fit_scaler(const Matrix& features, std::size_t cols) {
    if (features.rows() == 0) throw Error(ErrorKind::EmptyTrainingSet, "cannot fit a scaler on zero rows");
    if (cols > features.cols()) throw Error(ErrorKind::DimensionMismatch, "scaler wider than the matrix");
    ScalerParams params;
    params.mean.assign(cols, 0.0);
    params.stddev.assign(cols, 0.0);
    params.constant.assign(cols, false);
    const double n = static_cast<double>(features.rows());
    for (std::size_t j = 0; j < cols; ++j) {
        double sum = 0.0;
        double lo = features(0, j);
        double hi = lo;
        for (std::size_t i = 0; i < features.rows(); ++i) {
            const double v = features(i, j);
            sum += v;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        const double mean = sum / n;
        double sq = 0.0;
        for (std::size_t i = 0; i < features.rows(); ++i) {
            const double d = features(i, j) - mean;
            sq += d * d;
        }
        params.mean[j] = mean;
        params.stddev[j] = std::sqrt(sq / n);
        params.constant[j] = lo == hi || params.stddev[j] == 0.0;
    }
    return params;
}

void apply_scaler(std::span<double> row, const ScalerParams& params) {
    if (row.size() < params.size()) throw Error(ErrorKind::DimensionMismatch, "row narrower than scaler");
    for (std::size_t j = 0; j < params.size(); ++j) {
        row[j] = params.constant[j] ? 0.0 : (row[j] - params.mean[j]) / params.stddev[j];
    }
}

void apply_scaler(Matrix& features, const ScalerParams& params) {
    for (std::size_t i = 0; i < features.rows(); ++i) apply_scaler(features.row(i), params);
}

}  // namespace passgauge::dataset
