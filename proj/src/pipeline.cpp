#include "passgauge/pipeline.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

#include "passgauge/error.hpp"
#include "passgauge/rng.hpp"

namespace passgauge {

using nlohmann::json;

namespace {

constexpr std::string_view kArchiveFormat = "passgauge-pipeline";
constexpr std::uint64_t kSmoteStream = 0x5307E;
constexpr std::uint64_t kModelStream = 0x70DE1;
constexpr std::uint64_t kGridStream = 0x6121D;

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json forest_params_json(const models::ForestParams& p) {
    return {{"n_trees", p.n_trees},
            {"max_depth", p.max_depth},
            {"min_samples_split", p.min_samples_split},
            {"bootstrap", p.bootstrap},
            {"feature_subsample", p.feature_subsample}};
}

models::ForestParams forest_params_from(const json& j) {
    models::ForestParams p;
    p.n_trees = j.at("n_trees").get<int>();
    p.max_depth = j.at("max_depth").get<int>();
    p.min_samples_split = j.at("min_samples_split").get<std::size_t>();
    p.bootstrap = j.at("bootstrap").get<bool>();
    p.feature_subsample = j.at("feature_subsample").get<std::size_t>();
    return p;
}

json logreg_params_json(const models::LogRegParams& p) {
    return {{"learning_rate", p.learning_rate}, {"epochs", p.epochs}, {"l2", p.l2}};
}

models::LogRegParams logreg_params_from(const json& j) {
    return {j.at("learning_rate").get<double>(), j.at("epochs").get<int>(), j.at("l2").get<double>()};
}

json model_config_json(const models::ModelConfig& c) {
    json j = {{"family", models::to_string(c.family)}};
    if (c.family == models::ModelFamily::RandomForest) {
        j["forest"] = forest_params_json(c.forest);
    } else {
        j["logreg"] = logreg_params_json(c.logreg);
    }
    return j;
}

json model_json(const models::Classifier& model) {
    if (const auto* forest = model.forest()) {
        json trees = json::array();
        for (const auto& tree : forest->trees()) {
            json nodes = json::array();
            const auto& list = tree.nodes();
            for (std::size_t id = 0; id < list.size(); ++id) {
                const auto& n = list[id];
                nodes.push_back({id, n.feature, n.threshold, n.left, n.right, n.histogram});
            }
            trees.push_back(std::move(nodes));
        }
        return {{"family", "rf"},
                {"n_features", forest->n_features()},
                {"params", forest_params_json(forest->params())},
                {"seed", forest->seed()},
                {"trees", std::move(trees)}};
    }
    const auto* lr = model.logreg();
    json weights = json::array();
    for (std::size_t c = 0; c < lr->weights().rows(); ++c) {
        const auto row = lr->weights().row(c);
        weights.push_back(std::vector<double>(row.begin(), row.end()));
    }
    return {{"family", "logreg"},
            {"n_features", lr->n_features()},
            {"params", logreg_params_json(lr->params())},
            {"weights", std::move(weights)},
            {"bias", lr->bias()},
            {"loss_trace", lr->loss_trace()}};
}

models::Classifier model_from(const json& j) {
    const auto family = models::parse_family(j.at("family").get<std::string>());
    const auto n_features = j.at("n_features").get<std::size_t>();
    if (family == models::ModelFamily::RandomForest) {
        std::vector<models::DecisionTree> trees;
        for (const auto& tree : j.at("trees")) {
            std::vector<models::TreeNode> nodes;
            for (const auto& row : tree) {
                if (row.at(0).get<std::size_t>() != nodes.size()) {
                    throw Error(ErrorKind::CorruptArchive, "tree node ids are not contiguous");
                }
                models::TreeNode n;
                n.feature = row.at(1).get<int>();
                n.threshold = row.at(2).get<double>();
                n.left = row.at(3).get<int>();
                n.right = row.at(4).get<int>();
                n.histogram = row.at(5).get<std::array<std::uint32_t, models::kClasses>>();
                nodes.push_back(n);
            }
            for (const auto& n : nodes) {
                const auto valid = [&](int child) { return child > 0 && static_cast<std::size_t>(child) < nodes.size(); };
                if (!n.is_leaf() && (!valid(n.left) || !valid(n.right) ||
                                     static_cast<std::size_t>(n.feature) >= n_features)) {
                    throw Error(ErrorKind::CorruptArchive, "tree node references are out of range");
                }
            }
            if (nodes.empty()) throw Error(ErrorKind::CorruptArchive, "empty tree");
            trees.emplace_back(std::move(nodes));
        }
        return models::RandomForestModel(std::move(trees), n_features, forest_params_from(j.at("params")),
                                         j.at("seed").get<std::uint64_t>());
    }
    const auto rows = j.at("weights").get<std::vector<std::vector<double>>>();
    Matrix weights(rows.size(), n_features);
    for (std::size_t c = 0; c < rows.size(); ++c) {
        if (rows[c].size() != n_features) throw Error(ErrorKind::CorruptArchive, "weight row width");
        std::copy(rows[c].begin(), rows[c].end(), weights.row(c).begin());
    }
    return models::LogisticRegressionModel(std::move(weights), j.at("bias").get<std::vector<double>>(),
                                           logreg_params_from(j.at("params")),
                                           j.at("loss_trace").get<std::vector<double>>());
}

json payload_json(const TrainedPipeline& p) {
    json vocab = json::array();
    for (std::size_t i = 0; i < p.vocabulary.size(); ++i) {
        vocab.push_back({p.vocabulary.terms()[i].text, i, p.vocabulary.terms()[i].idf});
    }
    return {{"labels", p.label_names},
            {"metadata", p.metadata},
            {"dictionary", p.dictionary.terms()},
            {"vocabulary",
             {{"terms", std::move(vocab)},
              {"max_features", p.vocabulary.max_features()},
              {"corpus_size", p.vocabulary.corpus_size()}}},
            {"scaler",
             {{"mean", p.scaler.mean}, {"stddev", p.scaler.stddev}, {"constant", p.scaler.constant}}},
            {"model", model_json(p.model)}};
}

void append_features(Matrix& out, const std::array<double, featurex::kNumericFeatureCount>& numeric,
                     const ngrams::SparseVector& grams, std::vector<double>& scratch) {
    std::fill(scratch.begin(), scratch.end(), 0.0);
    std::copy(numeric.begin(), numeric.end(), scratch.begin());
    for (const auto& [col, w] : grams.entries) scratch[featurex::kNumericFeatureCount + col] = w;
    out.append_row(scratch);
}

}  // namespace

json config_to_json(const TrainingConfig& config) {
    return {{"model", model_config_json(config.model)},
            {"ngram_max_features", config.ngram_max_features},
            {"seed", config.seed},
            {"grid_search", config.grid_search},
            {"cv_folds", config.cv_folds},
            {"smote_k", config.smote_k},
            {"fractions",
             {{"train", config.fractions.train},
              {"validation", config.fractions.validation},
              {"test", config.fractions.test}}}};
}

std::vector<std::string> numeric_feature_names() {
    return {featurex::kNumericFeatureNames.begin(), featurex::kNumericFeatureNames.end()};
}

Matrix numeric_feature_matrix(const std::vector<dataset::PasswordRecord>& records,
                              const featurex::BreachedDictionary& dict) {
    Matrix out(0, featurex::kNumericFeatureCount);
    for (const auto& r : records) {
        out.append_row(featurex::extract_features(decode_utf8(r.password), dict).numeric());
    }
    return out;
}

std::vector<double> featurize(const TrainedPipeline& pipeline, std::u32string_view pw) {
    std::vector<double> row(pipeline.n_features(), 0.0);
    const auto numeric = featurex::extract_features(pw, pipeline.dictionary).numeric();
    std::copy(numeric.begin(), numeric.end(), row.begin());
    dataset::apply_scaler(row, pipeline.scaler);
    for (const auto& [col, w] : ngrams::transform(pw, pipeline.vocabulary).entries) {
        row[featurex::kNumericFeatureCount + col] = w;
    }
    return row;
}

TrainingOutcome train_pipeline(const std::vector<dataset::PasswordRecord>& records, const TrainingConfig& config,
                               const featurex::BreachedDictionary& dict, const std::string& data_hash) {
    if (records.empty()) throw Error(ErrorKind::EmptyTrainingSet, "no records to train on");
    if (dict.empty()) throw Error(ErrorKind::EmptyDictionary, "dictionary has no terms");

    std::vector<int> labels;
    labels.reserve(records.size());
    for (const auto& r : records) labels.push_back(r.label);

    TrainingOutcome outcome;
    outcome.split = dataset::stratified_split(labels, config.fractions, config.seed);
    const auto& train_ids = outcome.split.train;

    std::vector<PasswordText> train_text;
    train_text.reserve(train_ids.size());
    for (std::size_t id : train_ids) train_text.push_back(decode_utf8(records[id].password));

    TrainedPipeline& p = outcome.pipeline;
    p.dictionary = dict;
    p.vocabulary = ngrams::fit_vocabulary(train_text, config.ngram_max_features);

    Matrix x_train(0, p.n_features());
    std::vector<double> scratch(p.n_features());
    std::vector<int> y_train;
    for (std::size_t i = 0; i < train_ids.size(); ++i) {
        append_features(x_train, featurex::extract_features(train_text[i], dict).numeric(),
                        ngrams::transform(train_text[i], p.vocabulary), scratch);
        y_train.push_back(labels[train_ids[i]]);
    }

    p.scaler = dataset::fit_scaler(x_train, featurex::kNumericFeatureCount);
    dataset::apply_scaler(x_train, p.scaler);

    models::ModelConfig model_config = config.model;
    json grid_table = nullptr;
    if (config.grid_search) {
        const auto grid = models::default_grid(config.model.family);
        models::CvOptions cv;
        cv.folds = config.cv_folds;
        cv.smote_numeric_cols = featurex::kNumericFeatureCount;
        cv.smote_k = config.smote_k;
        cv.threads = config.threads;
        const auto result =
            models::grid_search_cv(grid, x_train, y_train, derive_seed(config.seed, kGridStream), cv);
        model_config = result.best;
        grid_table = json::array();
        for (std::size_t g = 0; g < grid.size(); ++g) {
            grid_table.push_back({{"config", model_config_json(grid[g])}, {"mean_accuracy", result.mean_accuracy[g]}});
        }
    }

    auto balanced = dataset::smote_balance(x_train, y_train, featurex::kNumericFeatureCount, config.smote_k,
                                           derive_seed(config.seed, kSmoteStream));
    outcome.synthetic_samples = balanced.synthetic;
    p.model = models::train_classifier(balanced.features, balanced.labels, model_config,
                                       derive_seed(config.seed, kModelStream), config.threads);

    std::size_t correct = 0;
    for (std::size_t id : outcome.split.validation) {
        correct += p.model.predict_class(featurize(p, decode_utf8(records[id].password))) == labels[id];
    }
    const auto& val = outcome.split.validation;
    std::array<std::size_t, dataset::kNumClasses> histogram{};
    for (int y : y_train) ++histogram[y];

    p.metadata = {{"seed", config.seed},
                  {"data_hash", data_hash},
                  {"trained_at", utc_timestamp()},
                  {"config", config_to_json(config)},
                  {"selected_model", model_config_json(model_config)},
                  {"records", records.size()},
                  {"split", {{"train", train_ids.size()}, {"validation", val.size()}, {"test", outcome.split.test.size()}}},
                  {"train_class_histogram", histogram},
                  {"smote_synthetic", balanced.synthetic},
                  {"validation_accuracy", val.empty() ? 0.0 : static_cast<double>(correct) / val.size()},
                  {"grid_search", grid_table},
                  {"feature_names", numeric_feature_names()},
                  {"ngram_vocabulary_size", p.vocabulary.size()}};
    return outcome;
}

Evaluation evaluate_pipeline(const TrainedPipeline& pipeline, const std::vector<dataset::PasswordRecord>& records,
                             const std::string& data_hash) {
    std::vector<dataset::PasswordRecord> subset;
    Evaluation result;
    const auto& meta = pipeline.metadata;
    if (!data_hash.empty() && meta.value("data_hash", std::string()) == data_hash && meta.contains("config")) {
        std::vector<int> labels;
        for (const auto& r : records) labels.push_back(r.label);
        const auto& f = meta.at("config").at("fractions");
        const dataset::SplitFractions fractions{f.at("train").get<double>(), f.at("validation").get<double>(),
                                                f.at("test").get<double>()};
        const auto split = dataset::stratified_split(labels, fractions, meta.at("seed").get<std::uint64_t>());
        for (std::size_t id : split.test) subset.push_back(records[id]);
        result.subset = "test";
    } else {
        subset = records;
        result.subset = "all";
    }
    if (subset.empty()) throw Error(ErrorKind::EmptyMatrix, "nothing to evaluate");

    std::vector<int> truth;
    std::vector<int> predicted;
    for (const auto& r : subset) {
        truth.push_back(r.label);
        predicted.push_back(pipeline.model.predict_class(featurize(pipeline, decode_utf8(r.password))));
    }
    result.samples = subset.size();
    result.confusion = eval::confusion_matrix(truth, predicted);
    result.metrics = eval::classification_metrics(result.confusion);
    result.ranking =
        eval::anova_f_scores(numeric_feature_matrix(subset, pipeline.dictionary), truth, numeric_feature_names());
    return result;
}

std::string serialize_pipeline(const TrainedPipeline& pipeline) {
    const json payload = payload_json(pipeline);
    const std::string body = payload.dump();
    const json archive = {{"format", kArchiveFormat},
                          {"schema_version", pipeline.schema_version},
                          {"checksum", dataset::content_hash(body)},
                          {"payload", payload}};
    return archive.dump() + "\n";
}

TrainedPipeline deserialize_pipeline(std::string_view archive) {
    json doc;
    try {
        doc = json::parse(archive);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::CorruptArchive, std::string("not a pipeline archive: ") + e.what());
    }
    try {
        if (!doc.is_object() || doc.value("format", std::string()) != kArchiveFormat) {
            throw Error(ErrorKind::CorruptArchive, "missing archive format marker");
        }
        const int version = doc.at("schema_version").get<int>();
        if (version != kSchemaVersion) {
            throw Error(ErrorKind::UnknownSchemaVersion, "schema version " + std::to_string(version) +
                                                             " is not supported (expected " +
                                                             std::to_string(kSchemaVersion) + ")");
        }
        const json& payload = doc.at("payload");
        if (dataset::content_hash(payload.dump()) != doc.at("checksum").get<std::string>()) {
            throw Error(ErrorKind::CorruptArchive, "checksum mismatch");
        }

        TrainedPipeline p;
        p.schema_version = version;
        p.label_names = payload.at("labels").get<std::vector<std::string>>();
        p.metadata = payload.at("metadata");
        p.dictionary = featurex::BreachedDictionary(payload.at("dictionary").get<std::vector<std::string>>());

        const json& vocab = payload.at("vocabulary");
        std::vector<ngrams::NgramVocabulary::Term> terms;
        for (const auto& t : vocab.at("terms")) {
            if (t.at(1).get<std::size_t>() != terms.size()) {
                throw Error(ErrorKind::CorruptArchive, "vocabulary columns are not contiguous");
            }
            terms.push_back({t.at(0).get<std::string>(), t.at(2).get<double>()});
        }
        p.vocabulary = ngrams::NgramVocabulary(std::move(terms), vocab.at("max_features").get<std::size_t>(),
                                               vocab.at("corpus_size").get<std::size_t>());

        const json& scaler = payload.at("scaler");
        p.scaler.mean = scaler.at("mean").get<std::vector<double>>();
        p.scaler.stddev = scaler.at("stddev").get<std::vector<double>>();
        p.scaler.constant = scaler.at("constant").get<std::vector<bool>>();
        p.model = model_from(payload.at("model"));

        if (p.scaler.size() != featurex::kNumericFeatureCount || p.scaler.stddev.size() != p.scaler.size() ||
            p.scaler.constant.size() != p.scaler.size() || p.model.n_features() != p.n_features() ||
            p.label_names.size() != dataset::kNumClasses || p.dictionary.empty()) {
            throw Error(ErrorKind::CorruptArchive, "inconsistent pipeline dimensions");
        }
        return p;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::CorruptArchive, std::string("malformed pipeline archive: ") + e.what());
    }
}

void save_pipeline(const TrainedPipeline& pipeline, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
    out << serialize_pipeline(pipeline);
    if (!out) throw Error(ErrorKind::IoError, "short write to " + path.string());
}

TrainedPipeline load_pipeline(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::FileNotFound, "cannot open model " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return deserialize_pipeline(buf.str());
}

}  // namespace passgauge
