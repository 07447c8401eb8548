#pragma once

#include <atomic>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>

#include "passgauge/pipeline.hpp"

namespace httplib {
class Server;
}

namespace passgauge {

struct HttpReply {
    int status = 200;
    std::string body;  // JSON
};

/// JSON-over-HTTP scoring endpoint. The pipeline is shared read-only across
/// handler threads; passwords are never logged or stored, only counters.
class ScoringService {
public:
    explicit ScoringService(std::shared_ptr<const TrainedPipeline> pipeline);
    ~ScoringService();

    ScoringService(const ScoringService&) = delete;
    ScoringService& operator=(const ScoringService&) = delete;

    // Transport-independent handlers.
    HttpReply score(std::string_view request_body);
    HttpReply health() const;
    HttpReply model_info() const;

    // Serves static files (the web meter) from dir under "/".
    bool mount_static(const std::filesystem::path& dir);

    // Port 0 picks a free port; returns the bound port or -1.
    int bind(const std::string& host, int port);
    // Blocks until stop().
    bool listen_after_bind();
    void stop();

    std::uint64_t requests_served() const { return served_.load(); }
    std::uint64_t requests_rejected() const { return rejected_.load(); }

private:
    std::shared_ptr<const TrainedPipeline> pipeline_;
    std::unique_ptr<httplib::Server> server_;
    std::atomic<std::uint64_t> served_{0};
    std::atomic<std::uint64_t> rejected_{0};
};

// "host:port" -> (host, port). Throws Error(InvalidArgument).
std::pair<std::string, int> parse_address(std::string_view addr);

}  // namespace passgauge
