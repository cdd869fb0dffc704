#include <charconv>
#include <string>

#include <httplib.h>

#include "cvkit/spat/gateway.hpp"

namespace cvkit::spat {

struct HttpGatewayServer::Impl {
    httplib::Server server;
};

HttpGatewayServer::HttpGatewayServer(Gateway& gateway, std::string bind_address, int port)
    : impl_(std::make_unique<Impl>()),
      gateway_(gateway),
      bind_address_(std::move(bind_address)),
      requested_port_(port) {}

HttpGatewayServer::~HttpGatewayServer() { stop(); }

void HttpGatewayServer::start() {
    auto& svr = impl_->server;

    // Long-poll handlers park their worker thread for up to 5 s, so the pool
    // must be wider than the expected number of concurrent pollers.
    svr.new_task_queue = [] { return new httplib::ThreadPool(96); };
    svr.set_keep_alive_max_count(1000000);

    svr.Get("/spat", [this](const httplib::Request& req, httplib::Response& res) {
        GatewaySnapshot snap;
        if (req.has_param("since")) {
            const std::string raw = req.get_param_value("since");
            std::uint64_t since = 0;
            auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), since);
            if (ec != std::errc{} || ptr != raw.data() + raw.size()) {
                res.status = 400;
                res.set_content(R"({"error":"since must be a non-negative integer"})",
                                "application/json");
                return;
            }
            snap = gateway_.wait_for_change(since, kLongPollTimeout);
        } else {
            snap = gateway_.current_snapshot();
        }
        res.set_content(snapshot_to_json(snap), "application/json");
    });

    svr.Get("/health", [this](const httplib::Request&, httplib::Response& res) {
        res.set_content(health_to_json(gateway_.current_snapshot(), gateway_.rejected_count()),
                        "application/json");
    });

    if (requested_port_ == 0) {
        bound_port_ = svr.bind_to_any_port(bind_address_);
        if (bound_port_ < 0) throw PortInUse("HTTP bind failed", requested_port_);
    } else {
        if (!svr.bind_to_port(bind_address_, requested_port_)) {
            throw PortInUse("HTTP bind failed", requested_port_);
        }
        bound_port_ = requested_port_;
    }

    thread_ = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
}

void HttpGatewayServer::stop() {
    if (impl_ && impl_->server.is_running()) {
        impl_->server.stop();
    }
    if (thread_.joinable()) thread_.join();
}

}  // namespace cvkit::spat
