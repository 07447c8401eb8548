#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "passgauge/error.hpp"
#include "passgauge/pipeline.hpp"
#include "test_support.hpp"

using namespace passgauge;

namespace {

ErrorKind load_error(std::string_view archive) {
    try {
        deserialize_pipeline(archive);
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("archive was accepted");
    return ErrorKind::InvalidArgument;
}

TrainingConfig tiny_config() {
    TrainingConfig c;
    c.model.forest.n_trees = 5;
    c.ngram_max_features = 50;
    return c;
}

}  // namespace

TEST_CASE("trained pipeline shape and metadata") {
    const auto p = testing::small_pipeline();
    CHECK(p->vocabulary.size() == 100);
    CHECK(p->n_features() == 111);
    CHECK(p->scaler.size() == featurex::kNumericFeatureCount);
    CHECK(p->model.n_features() == 111);
    CHECK(featurize(*p, U"Tr0ub4dor&3").size() == 111);
    CHECK(p->metadata.at("seed") == 42);
    CHECK(p->metadata.at("split").at("train") == 1050);
    CHECK(p->metadata.at("split").at("validation") == 150);
    CHECK(p->metadata.at("split").at("test") == 300);
    CHECK(p->metadata.at("validation_accuracy").get<double>() > 0.8);
    CHECK(numeric_feature_names().front() == "length");
}

TEST_CASE("held-out rows never influence the fitted pipeline") {
    const auto& all = testing::sample_records();
    std::vector<dataset::PasswordRecord> records(all.begin(), all.begin() + 600);
    const auto clean = train_pipeline(records, tiny_config(), featurex::BreachedDictionary::bundled());

    auto poisoned = records;
    for (std::size_t id : clean.split.validation) poisoned[id].password = "~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~";
    for (std::size_t id : clean.split.test) poisoned[id].password = std::string(60, 'Z') + "\xE2\x82\xAC";
    const auto dirty = train_pipeline(poisoned, tiny_config(), featurex::BreachedDictionary::bundled());

    CHECK(dirty.split.test == clean.split.test);
    CHECK(dirty.pipeline.scaler == clean.pipeline.scaler);
    CHECK(dirty.pipeline.vocabulary.terms().size() == clean.pipeline.vocabulary.terms().size());
    for (std::size_t i = 0; i < clean.pipeline.vocabulary.size(); ++i)
        CHECK(dirty.pipeline.vocabulary.terms()[i].text == clean.pipeline.vocabulary.terms()[i].text);
    REQUIRE(dirty.pipeline.model.forest() != nullptr);
    CHECK(*dirty.pipeline.model.forest() == *clean.pipeline.model.forest());
}

TEST_CASE("training is deterministic for a fixed seed") {
    const auto& all = testing::sample_records();
    std::vector<dataset::PasswordRecord> records(all.begin(), all.begin() + 600);
    auto config = tiny_config();
    config.model.family = models::ModelFamily::LogisticRegression;
    config.model.logreg.epochs = 50;
    const auto a = train_pipeline(records, config, featurex::BreachedDictionary::bundled());
    config.threads = 3;
    const auto b = train_pipeline(records, config, featurex::BreachedDictionary::bundled());
    REQUIRE(a.pipeline.model.logreg() != nullptr);
    CHECK(*a.pipeline.model.logreg() == *b.pipeline.model.logreg());
    CHECK_THROWS_AS(train_pipeline({}, config, featurex::BreachedDictionary::bundled()), Error);
    CHECK_THROWS_AS(train_pipeline(records, config, featurex::BreachedDictionary{}), Error);
}

TEST_CASE("evaluation uses the test split only for the training data") {
    const auto p = testing::small_pipeline();
    const auto& all = testing::sample_records();
    const std::vector<dataset::PasswordRecord> subset(all.begin(), all.begin() + 1500);

    auto with_hash = *p;
    with_hash.metadata["data_hash"] = "abc";
    const auto held_out = evaluate_pipeline(with_hash, subset, "abc");
    CHECK(held_out.subset == "test");
    CHECK(held_out.samples == 300);
    CHECK(held_out.confusion.total() == 300);
    CHECK(held_out.metrics.accuracy > 0.8);
    CHECK(held_out.ranking.scores.size() == featurex::kNumericFeatureCount);

    const auto other = evaluate_pipeline(with_hash, subset, "different");
    CHECK(other.subset == "all");
    CHECK(other.samples == 1500);
}

TEST_CASE("archives round trip and reject damage") {
    const auto p = testing::small_pipeline();
    const std::string archive = serialize_pipeline(*p);
    const auto restored = deserialize_pipeline(archive);
    CHECK(serialize_pipeline(restored) == archive);
    for (const char* pw : {"password", "Tr0ub4dor&3", "correct horse battery staple", "\xC3\xA9t\xC3\xA9"}) {
        const auto row = featurize(*p, decode_utf8(pw));
        CHECK(featurize(restored, decode_utf8(pw)) == row);
        CHECK(restored.model.predict_proba(row) == p->model.predict_proba(row));
    }

    CHECK(load_error(archive.substr(0, archive.size() / 2)) == ErrorKind::CorruptArchive);
    CHECK(load_error("") == ErrorKind::CorruptArchive);
    CHECK(load_error("{\"hello\":1}") == ErrorKind::CorruptArchive);

    auto doc = nlohmann::json::parse(archive);
    doc["schema_version"] = 999;
    CHECK(load_error(doc.dump()) == ErrorKind::UnknownSchemaVersion);

    doc = nlohmann::json::parse(archive);
    doc["payload"]["scaler"]["mean"][0] = 12345.0;
    CHECK(load_error(doc.dump()) == ErrorKind::CorruptArchive);

    const auto path = std::filesystem::temp_directory_path() / "passgauge_pipeline_test.json";
    save_pipeline(*p, path);
    CHECK(serialize_pipeline(load_pipeline(path)) == archive);
    std::filesystem::remove(path);
    try {
        load_pipeline("/nonexistent/model.json");
        FAIL("missing model loaded");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::FileNotFound);
    }
}
