#include "passgauge/service.hpp"

#include <charconv>

#include "httplib.h"
#include "passgauge/error.hpp"
#include "passgauge/scoring.hpp"

namespace passgauge {

using nlohmann::json;

namespace {

std::string dump(const json& j) { return j.dump(-1, ' ', false, json::error_handler_t::replace); }

HttpReply error_reply(int status, std::string_view message) {
    return {status, dump({{"error", message}})};
}

}  // namespace

ScoringService::ScoringService(std::shared_ptr<const TrainedPipeline> pipeline)
    : pipeline_(std::move(pipeline)), server_(std::make_unique<httplib::Server>()) {
    server_->set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                  {"Access-Control-Allow-Headers", "Content-Type"},
                                  {"Cache-Control", "no-store"}});
    server_->Post("/v1/score", [this](const httplib::Request& req, httplib::Response& res) {
        const auto reply = score(req.body);
        res.status = reply.status;
        res.set_content(reply.body, "application/json");
    });
    server_->Get("/v1/health", [this](const httplib::Request&, httplib::Response& res) {
        const auto reply = health();
        res.status = reply.status;
        res.set_content(reply.body, "application/json");
    });
    server_->Get("/v1/model", [this](const httplib::Request&, httplib::Response& res) {
        const auto reply = model_info();
        res.status = reply.status;
        res.set_content(reply.body, "application/json");
    });
    server_->Options(R"(/v1/.*)", [](const httplib::Request&, httplib::Response& res) {
        res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
        res.status = 204;
    });
}

ScoringService::~ScoringService() { stop(); }

HttpReply ScoringService::score(std::string_view request_body) {
    json body;
    try {
        body = json::parse(request_body);
    } catch (const json::exception&) {
        ++rejected_;
        return error_reply(400, "request body must be a JSON object");
    }
    if (!body.is_object() || !body.contains("password") || !body["password"].is_string()) {
        ++rejected_;
        return error_reply(400, "missing string field 'password'");
    }
    const auto result = score_password(*pipeline_, body["password"].get_ref<const std::string&>());
    ++served_;
    return {200, dump(to_json(result))};
}

HttpReply ScoringService::health() const {
    return {200, dump({{"status", "ok"}, {"model_schema", pipeline_->schema_version}})};
}

HttpReply ScoringService::model_info() const {
    json info = pipeline_->metadata;
    info["schema_version"] = pipeline_->schema_version;
    info["model_family"] = models::to_string(pipeline_->model.family());
    info["labels"] = pipeline_->label_names;
    info["dictionary_size"] = pipeline_->dictionary.size();
    return {200, dump(info)};
}

bool ScoringService::mount_static(const std::filesystem::path& dir) {
    return server_->set_mount_point("/", dir.string());
}

int ScoringService::bind(const std::string& host, int port) {
    if (port == 0) return server_->bind_to_any_port(host);
    return server_->bind_to_port(host, port) ? port : -1;
}

bool ScoringService::listen_after_bind() { return server_->listen_after_bind(); }

void ScoringService::stop() {
    if (server_) server_->stop();
}

std::pair<std::string, int> parse_address(std::string_view addr) {
    const auto colon = addr.rfind(':');
    if (colon == std::string_view::npos || colon == 0 || colon + 1 == addr.size()) {
        throw Error(ErrorKind::InvalidArgument, "address must look like host:port");
    }
    int port = -1;
    const auto digits = addr.substr(colon + 1);
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), port);
    if (ec != std::errc() || ptr != digits.data() + digits.size() || port < 0 || port > 65535) {
        throw Error(ErrorKind::InvalidArgument, "invalid port in '" + std::string(addr) + "'");
    }
    return {std::string(addr.substr(0, colon)), port};
}

}  // namespace passgauge
