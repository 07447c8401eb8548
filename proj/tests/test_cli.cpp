#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "passgauge/cli.hpp"
#include "test_support.hpp"

using namespace passgauge;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args, const std::string& input = {}) {
    std::istringstream in(input);
    std::ostringstream out, err;
    const int code = cli::run_command(args, in, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch_dir() {
    const auto dir = fs::temp_directory_path() / "passgauge_cli_test";
    fs::create_directories(dir);
    return dir;
}

fs::path small_csv() {
    const auto path = scratch_dir() / "small.csv";
    std::ofstream out(path);
    out << "password,strength\n";
    const auto& records = testing::sample_records();
    for (std::size_t i = 0; i < 600; ++i) out << '"' << records[i].password << "\"," << records[i].label << "\n";
    return path;
}

}  // namespace

TEST_CASE("usage errors exit with 1") {
    CHECK(run({}).code == cli::kExitUsage);
    CHECK(run({"train", "--bogus"}).code == cli::kExitUsage);
    CHECK(run({"frobnicate"}).code == cli::kExitUsage);
    CHECK(run({"score"}).code == cli::kExitUsage);
    CHECK(run({"train", "--data", "x.csv", "--out", "m.json", "--model", "svm"}).code == cli::kExitUsage);
}

TEST_CASE("missing inputs exit with 2") {
    CHECK(run({"score", "--model", "/nonexistent/model.json", "abc"}).code == cli::kExitData);
    const auto r = run({"train", "--data", "/nonexistent/data.csv", "--out", (scratch_dir() / "m.json").string()});
    CHECK(r.code == cli::kExitData);
    CHECK(r.err.find("error:") != std::string::npos);
}

TEST_CASE("train, evaluate, score and rank-features end to end") {
    const auto dir = scratch_dir();
    const auto csv = small_csv().string();
    const auto model = (dir / "model.json").string();
    const auto report = (dir / "report").string();

    const auto trained = run({"train", "--data", csv, "--out", model, "--trees", "5", "--ngram-max-features", "50",
                              "--seed", "7", "--report", (dir / "summary.json").string()});
    REQUIRE(trained.code == cli::kExitOk);
    CHECK(fs::exists(model));
    CHECK(fs::exists(dir / "summary.json"));

    const auto evaluated = run({"evaluate", "--model", model, "--data", csv, "--out-dir", report});
    CHECK(evaluated.code == cli::kExitOk);
    CHECK(nlohmann::json::parse(evaluated.out)["subset"] == "test");
    CHECK(fs::exists(fs::path(report) / "metrics.json"));
    CHECK(fs::exists(fs::path(report) / "confusion.csv"));
    CHECK(fs::exists(fs::path(report) / "feature_ranking.csv"));

    const auto scored = run({"score", "--model", model, "password1"});
    CHECK(scored.code == cli::kExitOk);
    const auto scored_json = nlohmann::json::parse(scored.out);
    CHECK(scored_json["dictionary_terms"][0] == "password");
    CHECK(scored_json["issues"][0] == "dictionary_word");

    const auto piped = run({"score", "--model", model, "--stdin"}, "correct horse battery staple\n");
    CHECK(piped.code == cli::kExitOk);
    CHECK(nlohmann::json::parse(piped.out).contains("probabilities"));

    const auto ranked = run({"rank-features", "--data", csv, "--out", (dir / "rank.csv").string()});
    CHECK(ranked.code == cli::kExitOk);
    std::ifstream rank(dir / "rank.csv");
    std::string header;
    std::getline(rank, header);
    CHECK(header == "rank,feature,f_score");

    fs::remove_all(dir);
}
