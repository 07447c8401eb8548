#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "passgauge/error.hpp"
#include "passgauge/service.hpp"
#include "test_support.hpp"

using namespace passgauge;
using nlohmann::json;

TEST_CASE("handlers without a transport") {
    ScoringService service(testing::small_pipeline());
    const auto ok = service.score(R"({"password":"hunter2"})");
    CHECK(ok.status == 200);
    CHECK(json::parse(ok.body)["class"] == "weak");
    CHECK(service.score("not json").status == 400);
    CHECK(service.score(R"({"pw":"x"})").status == 400);
    CHECK(service.score(R"({"password":5})").status == 400);
    CHECK(service.score("[]").status == 400);
    CHECK(service.requests_served() == 1);
    CHECK(service.requests_rejected() == 4);

    const auto info = json::parse(service.model_info().body);
    CHECK(info["model_family"] == "rf");
    CHECK(info["schema_version"] == kSchemaVersion);
    CHECK(json::parse(service.health().body)["status"] == "ok");
}

TEST_CASE("service answers over a real socket") {
    ScoringService service(testing::small_pipeline());
    const int port = service.bind("127.0.0.1", 0);
    REQUIRE(port > 0);
    std::thread server([&] { service.listen_after_bind(); });

    httplib::Client client("127.0.0.1", port);
    const auto health = client.Get("/v1/health");
    REQUIRE(health);
    CHECK(health->status == 200);
    CHECK(health->get_header_value("Access-Control-Allow-Origin") == "*");
    CHECK(health->get_header_value("Cache-Control") == "no-store");

    const auto scored = client.Post("/v1/score", R"({"password":"P@ssw0rd"})", "application/json");
    REQUIRE(scored);
    CHECK(scored->status == 200);
    const auto body = json::parse(scored->body);
    CHECK(body["class"] == "weak");
    CHECK(body["dictionary_terms"][0] == "password");

    const auto bad = client.Post("/v1/score", "{", "application/json");
    REQUIRE(bad);
    CHECK(bad->status == 400);
    CHECK(json::parse(bad->body).contains("error"));

    const auto model = client.Get("/v1/model");
    REQUIRE(model);
    CHECK(model->status == 200);
    CHECK(json::parse(model->body).contains("seed"));

    const auto preflight = client.Options("/v1/score");
    REQUIRE(preflight);
    CHECK(preflight->status == 204);

    service.stop();
    server.join();
}

TEST_CASE("parse_address") {
    CHECK(parse_address("127.0.0.1:8080") == std::pair<std::string, int>{"127.0.0.1", 8080});
    CHECK(parse_address("localhost:0").second == 0);
    CHECK_THROWS_AS(parse_address("8080"), Error);
    CHECK_THROWS_AS(parse_address("host:"), Error);
    CHECK_THROWS_AS(parse_address("host:99999"), Error);
    CHECK_THROWS_AS(parse_address("host:80x"), Error);
}
