#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "passgauge/featurex.hpp"
#include "passgauge/pipeline.hpp"

namespace passgauge {

inline constexpr int kMinLength = 12;
inline constexpr int kMinVariety = 4;
inline constexpr double kMinEntropyBits = 2.5;

struct Diagnostics {
    std::array<double, featurex::kNumericFeatureCount> numeric{};
    std::vector<std::string> dictionary_terms;
};

Diagnostics diagnose(std::u32string_view pw, const featurex::BreachedDictionary& dict);

// Issue ids in severity order, derived from the diagnostics alone.
std::vector<std::string> detect_issues(const Diagnostics& diagnostics);

/// Rule table loaded from the bundled message catalog
/// (data/recommendations.json).
class RecommendationCatalog {
public:
    struct Rule {
        std::string issue;
        int severity = 0;
        std::string message;
    };

    static RecommendationCatalog parse(std::string_view json_text);
    static const RecommendationCatalog& bundled();

    const std::vector<Rule>& rules() const { return rules_; }
    const Rule& fallback() const { return fallback_; }
    const Rule* find(std::string_view issue) const;

private:
    std::vector<Rule> rules_;  // ascending severity (most severe first)
    Rule fallback_;
};

// One message per triggered issue, most severe first; "{term}" expands to
// the longest matched dictionary term. Empty when nothing triggers.
std::vector<std::string> build_recommendations(const Diagnostics& diagnostics,
                                               const RecommendationCatalog& catalog = RecommendationCatalog::bundled());

struct ScoreResult {
    std::string class_name;
    int class_id = 0;
    std::array<double, 3> probabilities{};
    Diagnostics diagnostics;
    std::vector<std::string> issues;
    std::vector<std::string> recommendations;
    double latency_ms = 0.0;
};

// Never throws for any input text. The empty string is scored weak with
// probability 1 without consulting the model.
ScoreResult score_password(const TrainedPipeline& pipeline, std::u32string_view pw);
ScoreResult score_password(const TrainedPipeline& pipeline, std::string_view utf8);

nlohmann::json to_json(const ScoreResult& result);

}  // namespace passgauge
