#include <random>

#include "doctest.h"
#include "passgauge/error.hpp"
#include "passgauge/scoring.hpp"
#include "test_support.hpp"

using namespace passgauge;

TEST_CASE("issues follow severity order") {
    const auto& dict = featurex::BreachedDictionary::bundled();
    CHECK(detect_issues(diagnose(U"password123", dict)) ==
          std::vector<std::string>{"dictionary_word", "sequential_pattern", "too_short", "low_variety"});
    CHECK(detect_issues(diagnose(U"aaaa", dict)) ==
          std::vector<std::string>{"repeated_pattern", "too_short", "low_variety", "low_entropy"});
    CHECK(detect_issues(diagnose(U"mK8#vQ2!zR5@wL", dict)).empty());
}

TEST_CASE("recommendations expand the matched term") {
    const auto& dict = featurex::BreachedDictionary::bundled();
    const auto recs = build_recommendations(diagnose(U"P@ssw0rd", dict));
    REQUIRE(recs.size() >= 2);
    CHECK(recs[0].find("\"password\"") != std::string::npos);
    CHECK(recs[0].find("{term}") == std::string::npos);
    CHECK(build_recommendations(diagnose(U"mK8#vQ2!zR5@wL", dict)).empty());
}

TEST_CASE("catalog parsing") {
    const auto& catalog = RecommendationCatalog::bundled();
    REQUIRE(catalog.rules().size() == 6);
    for (std::size_t i = 1; i < catalog.rules().size(); ++i)
        CHECK(catalog.rules()[i - 1].severity < catalog.rules()[i].severity);
    CHECK(catalog.find("too_short") != nullptr);
    CHECK(catalog.find("nope") == nullptr);
    CHECK(catalog.fallback().issue == "model_flagged");
    CHECK_THROWS_AS(RecommendationCatalog::parse("{\"rules\": 3}"), Error);

    const auto custom = RecommendationCatalog::parse(
        R"({"rules":[{"issue":"too_short","severity":2,"message":"short"},)"
        R"({"issue":"low_variety","severity":1,"message":"mix"}],"fallback":{"issue":"f","message":"m"}})");
    const auto recs = build_recommendations(diagnose(U"abc", featurex::BreachedDictionary::bundled()), custom);
    CHECK(recs == std::vector<std::string>{"mix", "short"});
}

TEST_CASE("score_password on the small pipeline") {
    const auto p = testing::small_pipeline();

    const auto empty = score_password(*p, std::string_view(""));
    CHECK(empty.class_name == "weak");
    CHECK(empty.probabilities == std::array<double, 3>{1.0, 0.0, 0.0});
    CHECK_FALSE(empty.recommendations.empty());

    const auto weak = score_password(*p, std::string_view("password"));
    CHECK(weak.class_name == "weak");
    CHECK(weak.diagnostics.dictionary_terms.front() == "password");
    CHECK(weak.issues.front() == "dictionary_word");

    const auto strong = score_password(*p, std::string_view("Xk#9mQ2$vLp7!Rw4"));
    CHECK(strong.class_name == "strong");

    const auto j = to_json(weak);
    for (const char* key : {"class", "class_id", "probabilities", "diagnostics", "dictionary_terms", "issues",
                            "recommendations", "latency_ms"})
        CHECK(j.contains(key));
    CHECK(j["diagnostics"].size() == featurex::kNumericFeatureCount);
    CHECK(j["probabilities"].contains("medium"));
}

TEST_CASE("scoring never throws on arbitrary bytes") {
    const auto p = testing::small_pipeline();
    std::mt19937_64 rng(31);
    for (int iter = 0; iter < 300; ++iter) {
        std::string bytes(rng() % 40, '\0');
        for (char& b : bytes) b = static_cast<char>(rng() & 0xFF);
        ScoreResult r;
        CHECK_NOTHROW(r = score_password(*p, std::string_view(bytes)));
        CHECK(r.probabilities[0] + r.probabilities[1] + r.probabilities[2] == doctest::Approx(1.0));
        CHECK_NOTHROW(to_json(r).dump(-1, ' ', false, nlohmann::json::error_handler_t::replace));
    }
}
