#include "passgauge/scoring.hpp"

#include <algorithm>
#include <chrono>

#include "passgauge/error.hpp"
#include "passgauge_assets.hpp"

namespace passgauge {

using nlohmann::json;

Diagnostics diagnose(std::u32string_view pw, const featurex::BreachedDictionary& dict) {
    auto fv = featurex::extract_features(pw, dict);
    return {fv.numeric(), std::move(fv.patterns.dictionary_terms)};
}

std::vector<std::string> detect_issues(const Diagnostics& d) {
    using namespace featurex;
    std::vector<std::string> issues;
    if (d.numeric[kDictionary] != 0.0) issues.emplace_back("dictionary_word");
    if (d.numeric[kSequence] != 0.0) issues.emplace_back("sequential_pattern");
    if (d.numeric[kRepeat] != 0.0) issues.emplace_back("repeated_pattern");
    if (d.numeric[kLength] < kMinLength) issues.emplace_back("too_short");
    if (d.numeric[kVariety] < kMinVariety) issues.emplace_back("low_variety");
    if (d.numeric[kEntropy] < kMinEntropyBits) issues.emplace_back("low_entropy");
    return issues;
}

RecommendationCatalog RecommendationCatalog::parse(std::string_view json_text) {
    try {
        const json doc = json::parse(json_text);
        RecommendationCatalog catalog;
        for (const auto& r : doc.at("rules")) {
            catalog.rules_.push_back(
                {r.at("issue").get<std::string>(), r.at("severity").get<int>(), r.at("message").get<std::string>()});
        }
        std::stable_sort(catalog.rules_.begin(), catalog.rules_.end(),
                         [](const Rule& a, const Rule& b) { return a.severity < b.severity; });
        const auto& fb = doc.at("fallback");
        catalog.fallback_ = {fb.at("issue").get<std::string>(), 0, fb.at("message").get<std::string>()};
        return catalog;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::InvalidArgument, std::string("malformed recommendation catalog: ") + e.what());
    }
}

const RecommendationCatalog& RecommendationCatalog::bundled() {
    static const RecommendationCatalog catalog = parse(assets::kRecommendations);
    return catalog;
}

const RecommendationCatalog::Rule* RecommendationCatalog::find(std::string_view issue) const {
    for (const auto& r : rules_) {
        if (r.issue == issue) return &r;
    }
    return nullptr;
}

std::vector<std::string> build_recommendations(const Diagnostics& diagnostics, const RecommendationCatalog& catalog) {
    const auto issues = detect_issues(diagnostics);
    std::vector<std::string> messages;
    for (const auto& rule : catalog.rules()) {
        if (std::find(issues.begin(), issues.end(), rule.issue) == issues.end()) continue;
        std::string msg = rule.message;
        const auto at = msg.find("{term}");
        if (at != std::string::npos) {
            msg.replace(at, 6, diagnostics.dictionary_terms.empty() ? "" : diagnostics.dictionary_terms.front());
        }
        messages.push_back(std::move(msg));
    }
    return messages;
}

ScoreResult score_password(const TrainedPipeline& pipeline, std::u32string_view pw) {
    const auto start = std::chrono::steady_clock::now();
    ScoreResult result;
    result.diagnostics = diagnose(pw, pipeline.dictionary);
    if (pw.empty()) {
        result.probabilities = {1.0, 0.0, 0.0};
    } else {
        result.probabilities = pipeline.model.predict_proba(featurize(pipeline, pw));
    }
    result.class_id = models::argmax_low(result.probabilities);
    result.class_name = pipeline.label_names.at(static_cast<std::size_t>(result.class_id));
    result.issues = detect_issues(result.diagnostics);
    result.recommendations = build_recommendations(result.diagnostics);
    if (result.recommendations.empty() && result.class_id != 2) {
        result.recommendations.push_back(RecommendationCatalog::bundled().fallback().message);
    }
    result.latency_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return result;
}

ScoreResult score_password(const TrainedPipeline& pipeline, std::string_view utf8) {
    return score_password(pipeline, decode_utf8(utf8));
}

json to_json(const ScoreResult& r) {
    json diagnostics = json::object();
    for (std::size_t i = 0; i < featurex::kNumericFeatureCount; ++i) {
        diagnostics[std::string(featurex::kNumericFeatureNames[i])] = r.diagnostics.numeric[i];
    }
    return {{"class", r.class_name},
            {"class_id", r.class_id},
            {"probabilities", {{"weak", r.probabilities[0]}, {"medium", r.probabilities[1]}, {"strong", r.probabilities[2]}}},
            {"diagnostics", std::move(diagnostics)},
            {"dictionary_terms", r.diagnostics.dictionary_terms},
            {"issues", r.issues},
            {"recommendations", r.recommendations},
            {"latency_ms", r.latency_ms}};
}

}  // namespace passgauge
