#include "passgauge/cli.hpp"

#include <cstdlib>
#include <iostream>
#include <memory>

#include "CLI11.hpp"
#include "passgauge/error.hpp"
#include "passgauge/pipeline.hpp"
#include "passgauge/scoring.hpp"
#include "passgauge/service.hpp"

namespace passgauge::cli {

using nlohmann::json;

namespace {

json ingest_json(const dataset::IngestReport& r) {
    return {{"rows_read", r.rows_read},
            {"duplicates_removed", r.duplicates_removed},
            {"nulls_removed", r.nulls_removed},
            {"malformed_skipped", r.malformed_skipped},
            {"rows_kept", r.rows_kept},
            {"label_conflicts", r.label_conflicts},
            {"class_histogram",
             {{"weak", r.class_histogram[0]}, {"medium", r.class_histogram[1]}, {"strong", r.class_histogram[2]}}}};
}

std::string dump(const json& j, int indent = 2) {
    return j.dump(indent, ' ', false, json::error_handler_t::replace);
}

featurex::BreachedDictionary dictionary_from(const std::string& path) {
    return path.empty() ? featurex::BreachedDictionary::bundled() : featurex::BreachedDictionary::load(path);
}

std::string model_path_or_env(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("PASSGAUGE_MODEL"); env != nullptr && *env != '\0') return env;
    throw Error(ErrorKind::InvalidArgument, "no model given: pass --model or set PASSGAUGE_MODEL");
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"passgauge: machine-learned password strength scoring", "passgauge"};
    app.require_subcommand(1);

    TrainingConfig train_cfg;
    std::string data_path;
    std::string model_path;
    std::string out_path;
    std::string dict_path;
    std::string report_path;
    std::string family = "rf";
    auto* train = app.add_subcommand("train", "Fit a pipeline on a password,strength CSV");
    train->add_option("--data", data_path, "Training CSV")->required();
    train->add_option("--out", out_path, "Output model archive")->required();
    train->add_option("--trees", train_cfg.model.forest.n_trees, "Random forest size")->capture_default_str()
        ->check(CLI::PositiveNumber);
    train->add_option("--max-depth", train_cfg.model.forest.max_depth, "Tree depth limit, 0 = unlimited")
        ->capture_default_str()->check(CLI::NonNegativeNumber);
    train->add_option("--ngram-max-features", train_cfg.ngram_max_features, "TF-IDF vocabulary cap")
        ->capture_default_str()->check(CLI::PositiveNumber);
    train->add_option("--dict", dict_path, "Breached-password list (default: bundled)");
    train->add_option("--seed", train_cfg.seed, "Master seed")->capture_default_str();
    train->add_option("--model", family, "Model family")->check(CLI::IsMember({"rf", "logreg"}))->capture_default_str();
    train->add_flag("--grid-search", train_cfg.grid_search, "Select hyperparameters by 5-fold CV");
    train->add_option("--threads", train_cfg.threads, "Worker threads for tree training")->capture_default_str()
        ->check(CLI::PositiveNumber);
    train->add_option("--report", report_path, "Also write the training summary JSON here");

    std::string out_dir;
    auto* evaluate = app.add_subcommand("evaluate", "Score a labelled CSV and write metric reports");
    evaluate->add_option("--model", model_path, "Model archive");
    evaluate->add_option("--data", data_path, "Labelled CSV")->required();
    evaluate->add_option("--out-dir", out_dir, "Report directory")->required();

    std::string password;
    bool from_stdin = false;
    auto* score = app.add_subcommand("score", "Score one password and print a JSON result");
    score->add_option("--model", model_path, "Model archive");
    auto* pw_opt = score->add_option("password", password, "Password to score");
    auto* stdin_opt = score->add_flag("--stdin", from_stdin, "Read the password from standard input");
    pw_opt->excludes(stdin_opt);

    auto* rank = app.add_subcommand("rank-features", "ANOVA F ranking of the hand-engineered features");
    rank->add_option("--data", data_path, "Labelled CSV")->required();
    rank->add_option("--out", out_path, "Output CSV")->required();
    rank->add_option("--dict", dict_path, "Breached-password list (default: bundled)");

    std::string addr;
    std::string static_dir;
    auto* serve = app.add_subcommand("serve", "Run the HTTP scoring service");
    serve->add_option("--model", model_path, "Model archive");
    serve->add_option("--addr", addr, "host:port to listen on")->required();
    serve->add_option("--static", static_dir, "Directory of web assets served under /");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }
    if (score->parsed() && !from_stdin && pw_opt->count() == 0) {
        err << "score: give a password or --stdin\n" << score->help();
        return kExitUsage;
    }

    try {
        if (train->parsed()) {
            train_cfg.model.family = models::parse_family(family);
            const auto data = dataset::load_csv(data_path);
            const auto dict = dictionary_from(dict_path);
            auto outcome = train_pipeline(data.records, train_cfg, dict, dataset::file_hash(data_path));
            save_pipeline(outcome.pipeline, out_path);
            json summary = {{"ingest", ingest_json(data.report)},
                            {"model", out_path},
                            {"metadata", outcome.pipeline.metadata}};
            summary["metadata"].erase("feature_names");
            out << dump(summary) << "\n";
            if (!report_path.empty()) {
                std::ofstream rep(report_path);
                if (!rep) throw Error(ErrorKind::IoError, "cannot write " + report_path);
                rep << dump(summary) << "\n";
            }
        } else if (evaluate->parsed()) {
            const auto pipeline = load_pipeline(model_path_or_env(model_path));
            const auto data = dataset::load_csv(data_path);
            const auto result = evaluate_pipeline(pipeline, data.records, dataset::file_hash(data_path));
            eval::emit_report(result.metrics, result.confusion, result.ranking, out_dir);
            out << dump({{"subset", result.subset},
                         {"samples", result.samples},
                         {"accuracy", result.metrics.accuracy},
                         {"weighted_f1", result.metrics.weighted.f1},
                         {"out_dir", out_dir}})
                << "\n";
        } else if (score->parsed()) {
            const auto pipeline = load_pipeline(model_path_or_env(model_path));
            if (from_stdin) {
                std::getline(in, password);
                if (!password.empty() && password.back() == '\r') password.pop_back();
            }
            out << dump(to_json(score_password(pipeline, std::string_view(password)))) << "\n";
        } else if (rank->parsed()) {
            const auto data = dataset::load_csv(data_path);
            std::vector<int> labels;
            for (const auto& r : data.records) labels.push_back(r.label);
            const auto ranking = eval::anova_f_scores(numeric_feature_matrix(data.records, dictionary_from(dict_path)),
                                                      labels, numeric_feature_names());
            std::ofstream csv(out_path, std::ios::binary | std::ios::trunc);
            if (!csv) throw Error(ErrorKind::IoError, "cannot write " + out_path);
            csv << eval::ranking_to_csv(ranking);
        } else if (serve->parsed()) {
            const auto [host, port] = parse_address(addr);
            auto pipeline = std::make_shared<const TrainedPipeline>(load_pipeline(model_path_or_env(model_path)));
            ScoringService service(pipeline);
            if (!static_dir.empty() && !service.mount_static(static_dir)) {
                throw Error(ErrorKind::FileNotFound, "static directory " + static_dir + " not found");
            }
            const int bound = service.bind(host, port);
            if (bound < 0) throw Error(ErrorKind::IoError, "cannot bind " + std::string(addr));
            err << "passgauge: listening on " << host << ":" << bound << "\n";
            service.listen_after_bind();
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return e.kind() == ErrorKind::InvalidArgument ? kExitUsage : kExitData;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitOk;
}

}  // namespace passgauge::cli
