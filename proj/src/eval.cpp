#include "passgauge/eval.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include "json.hpp"
#include <sstream>

#include "passgauge/dataset.hpp"
#include "passgauge/error.hpp"

namespace passgauge::eval {

using nlohmann::json;

std::size_t ConfusionMatrix::total() const {
    std::size_t sum = 0;
    for (const auto& row : cells) {
        for (std::size_t v : row) sum += v;
    }
    return sum;
}

ConfusionMatrix confusion_matrix(std::span<const int> truth, std::span<const int> predicted) {
    if (truth.size() != predicted.size()) {
        throw Error(ErrorKind::LengthMismatch, "truth and prediction sequences differ in length");
    }
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] < 0 || truth[i] >= kClasses || predicted[i] < 0 || predicted[i] >= kClasses) {
            throw Error(ErrorKind::InvalidLabel, "label outside {0,1,2} at position " + std::to_string(i));
        }
        ++cm.cells[truth[i]][predicted[i]];
    }
    return cm;
}

MetricsReport classification_metrics(const std::vector<std::vector<std::size_t>>& cm) {
    const std::size_t k = cm.size();
    std::size_t total = 0;
    std::size_t trace = 0;
    for (std::size_t i = 0; i < k; ++i) {
        if (cm[i].size() != k) throw Error(ErrorKind::DimensionMismatch, "confusion matrix must be square");
        for (std::size_t j = 0; j < k; ++j) total += cm[i][j];
        trace += cm[i][i];
    }
    if (total == 0) throw Error(ErrorKind::EmptyMatrix, "no samples in the confusion matrix");

    MetricsReport report;
    report.accuracy = static_cast<double>(trace) / static_cast<double>(total);
    report.weighted.support = total;
    const auto ratio = [](std::size_t num, std::size_t den) {
        return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
    };
    for (std::size_t c = 0; c < k; ++c) {
        std::size_t predicted = 0;
        std::size_t actual = 0;
        for (std::size_t j = 0; j < k; ++j) {
            predicted += cm[j][c];
            actual += cm[c][j];
        }
        ClassMetrics m;
        m.support = actual;
        m.precision = ratio(cm[c][c], predicted);
        m.recall = ratio(cm[c][c], actual);
        m.f1 = m.precision + m.recall == 0.0 ? 0.0 : 2.0 * m.precision * m.recall / (m.precision + m.recall);
        const double w = static_cast<double>(actual) / static_cast<double>(total);
        report.weighted.precision += w * m.precision;
        report.weighted.recall += w * m.recall;
        report.weighted.f1 += w * m.f1;
        if (c < static_cast<std::size_t>(kClasses)) report.per_class[c] = m;
    }
    return report;
}

MetricsReport classification_metrics(const ConfusionMatrix& cm) {
    std::vector<std::vector<std::size_t>> cells(kClasses, std::vector<std::size_t>(kClasses));
    for (int i = 0; i < kClasses; ++i) std::copy(cm.cells[i].begin(), cm.cells[i].end(), cells[i].begin());
    return classification_metrics(cells);
}

bool FeatureRanking::operator==(const FeatureRanking& other) const {
    if (scores.size() != other.scores.size()) return false;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (scores[i].name != other.scores[i].name || scores[i].f_value != other.scores[i].f_value) return false;
    }
    return true;
}

std::vector<double> anova_f_values(const Matrix& features, std::span<const int> labels) {
    if (features.rows() != labels.size()) throw Error(ErrorKind::LengthMismatch, "rows and labels differ");
    std::array<std::size_t, kClasses> count{};
    for (int y : labels) {
        if (y < 0 || y >= kClasses) throw Error(ErrorKind::InvalidLabel, "label out of range");
        ++count[y];
    }
    std::size_t groups = 0;
    for (std::size_t c : count) {
        if (c == 1) throw Error(ErrorKind::InsufficientClassSize, "every class needs at least 2 samples");
        groups += c > 0;
    }
    if (groups < 2) throw Error(ErrorKind::InsufficientClassSize, "ANOVA needs at least 2 classes");

    const double n = static_cast<double>(features.rows());
    const double k = static_cast<double>(groups);
    std::vector<double> f(features.cols(), 0.0);
    for (std::size_t j = 0; j < features.cols(); ++j) {
        std::array<double, kClasses> sum{};
        double grand = 0.0;
        for (std::size_t i = 0; i < features.rows(); ++i) {
            sum[labels[i]] += features(i, j);
            grand += features(i, j);
        }
        grand /= n;
        std::array<double, kClasses> mean{};
        double between = 0.0;
        for (int c = 0; c < kClasses; ++c) {
            if (count[c] == 0) continue;
            mean[c] = sum[c] / static_cast<double>(count[c]);
            between += static_cast<double>(count[c]) * (mean[c] - grand) * (mean[c] - grand);
        }
        double within = 0.0;
        for (std::size_t i = 0; i < features.rows(); ++i) {
            const double d = features(i, j) - mean[labels[i]];
            within += d * d;
        }
        // Rounding noise on a constant column must not read as signal.
        const double scale = std::max(1.0, grand * grand) * n * 1e-24;
        if (between <= scale) between = 0.0;
        if (within <= scale) within = 0.0;
        if (within == 0.0) {
            f[j] = between > 0.0 ? kPerfectSeparation : 0.0;
        } else {
            f[j] = (between / (k - 1.0)) / (within / (n - k));
        }
    }
    return f;
}

FeatureRanking anova_f_scores(const Matrix& features, std::span<const int> labels,
                              std::span<const std::string> names) {
    if (names.size() != features.cols()) throw Error(ErrorKind::DimensionMismatch, "one name per column");
    const auto f = anova_f_values(features, labels);
    FeatureRanking ranking;
    for (std::size_t j = 0; j < f.size(); ++j) ranking.scores.push_back({names[j], f[j]});
    std::stable_sort(ranking.scores.begin(), ranking.scores.end(),
                     [](const FeatureScore& a, const FeatureScore& b) { return a.f_value > b.f_value; });
    return ranking;
}

namespace {

json class_metrics_json(const ClassMetrics& m) {
    return {{"f1", m.f1}, {"precision", m.precision}, {"recall", m.recall}, {"support", m.support}};
}

ClassMetrics class_metrics_from(const json& j) {
    return {j.at("precision").get<double>(), j.at("recall").get<double>(), j.at("f1").get<double>(),
            j.at("support").get<std::size_t>()};
}

std::vector<std::vector<std::string>> split_csv(std::string_view text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ls(line);
        std::string field;
        while (std::getline(ls, field, ',')) fields.push_back(field);
        rows.push_back(std::move(fields));
    }
    return rows;
}

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return json(v).dump();
}

double parse_double(const std::string& s) {
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    return json::parse(s).get<double>();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
    out << content;
    if (!out) throw Error(ErrorKind::IoError, "short write to " + path.string());
}

}  // namespace

std::string metrics_to_json(const MetricsReport& metrics, const ConfusionMatrix& cm) {
    json per_class = json::object();
    json confusion = json::array();
    for (int c = 0; c < kClasses; ++c) {
        per_class[std::string(dataset::kLabelNames[c])] = class_metrics_json(metrics.per_class[c]);
        confusion.push_back(cm.cells[c]);
    }
    const json doc = {{"accuracy", metrics.accuracy},
                      {"confusion_matrix", confusion},
                      {"labels", std::vector<std::string>(dataset::kLabelNames.begin(), dataset::kLabelNames.end())},
                      {"per_class", per_class},
                      {"weighted", class_metrics_json(metrics.weighted)}};
    return doc.dump(2) + "\n";
}

MetricsReport metrics_from_json(std::string_view text) {
    try {
        const json doc = json::parse(text);
        MetricsReport m;
        m.accuracy = doc.at("accuracy").get<double>();
        for (int c = 0; c < kClasses; ++c) {
            m.per_class[c] = class_metrics_from(doc.at("per_class").at(std::string(dataset::kLabelNames[c])));
        }
        m.weighted = class_metrics_from(doc.at("weighted"));
        return m;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::IoError, std::string("malformed metrics json: ") + e.what());
    }
}

std::string confusion_to_csv(const ConfusionMatrix& cm) {
    std::string out = "true\\predicted";
    for (auto name : dataset::kLabelNames) out += "," + std::string(name);
    out += "\n";
    for (int i = 0; i < kClasses; ++i) {
        out += dataset::kLabelNames[i];
        for (int j = 0; j < kClasses; ++j) out += "," + std::to_string(cm.cells[i][j]);
        out += "\n";
    }
    return out;
}

ConfusionMatrix confusion_from_csv(std::string_view text) {
    const auto rows = split_csv(text);
    if (rows.size() != kClasses + 1) throw Error(ErrorKind::IoError, "confusion csv needs 4 rows");
    ConfusionMatrix cm;
    for (int i = 0; i < kClasses; ++i) {
        const auto& row = rows[i + 1];
        if (row.size() != kClasses + 1 || row[0] != dataset::kLabelNames[i]) {
            throw Error(ErrorKind::IoError, "unexpected confusion csv row");
        }
        for (int j = 0; j < kClasses; ++j) cm.cells[i][j] = std::stoull(row[j + 1]);
    }
    return cm;
}

std::string ranking_to_csv(const FeatureRanking& ranking) {
    std::string out = "rank,feature,f_score\n";
    for (std::size_t i = 0; i < ranking.scores.size(); ++i) {
        out += std::to_string(i + 1) + "," + ranking.scores[i].name + "," +
               format_double(ranking.scores[i].f_value) + "\n";
    }
    return out;
}

FeatureRanking ranking_from_csv(std::string_view text) {
    const auto rows = split_csv(text);
    if (rows.empty() || rows[0] != std::vector<std::string>{"rank", "feature", "f_score"}) {
        throw Error(ErrorKind::IoError, "unexpected feature ranking header");
    }
    FeatureRanking ranking;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].size() != 3) throw Error(ErrorKind::IoError, "feature ranking rows have 3 fields");
        ranking.scores.push_back({rows[i][1], parse_double(rows[i][2])});
    }
    return ranking;
}

void emit_report(const MetricsReport& metrics, const ConfusionMatrix& cm, const FeatureRanking& ranking,
                 const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::IoError, "cannot create " + dir.string() + ": " + ec.message());
    write_file(dir / "metrics.json", metrics_to_json(metrics, cm));
    write_file(dir / "confusion.csv", confusion_to_csv(cm));
    write_file(dir / "feature_ranking.csv", ranking_to_csv(ranking));
}

}  // namespace passgauge::eval
