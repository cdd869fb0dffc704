#include "cvkit/spat/gateway.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <array>
#include <cerrno>
#include <cstring>
#include <ctime>

#include <json.hpp>

namespace cvkit::spat {

IngestResult Gateway::ingest_datagram(std::span<const std::uint8_t> bytes,
                                      std::chrono::steady_clock::time_point recv_time) {
    IntersectionState state;
    try {
        state = interpret_state(parse_spat_packet(bytes));
    } catch (const Error& e) {
        std::lock_guard lock(mu_);
        ++rejected_;
        return IngestResult{IngestOutcome::Rejected, snap_, e.what()};
    }

    std::unique_lock lock(mu_);
    ++snap_.packets_seen;
    if (state == snap_.state) {
        // Covers a first packet matching the all-Red sentinel: the sentinel
        // already describes it, so nothing is published.
        return IngestResult{IngestOutcome::Unchanged, snap_, {}};
    }
    snap_.state = state;
    ++snap_.sequence;
    ++snap_.changes_seen;
    snap_.ingest_time = recv_time;
    snap_.wall_time = std::chrono::system_clock::now();
    const IngestResult result{IngestOutcome::Changed, snap_, {}};
    lock.unlock();
    cv_.notify_all();
    return result;
}

GatewaySnapshot Gateway::current_snapshot() const {
    std::lock_guard lock(mu_);
    return snap_;
}

GatewaySnapshot Gateway::wait_for_change(std::uint64_t since,
                                         std::chrono::milliseconds timeout) const {
    std::unique_lock lock(mu_);
    cv_.wait_for(lock, timeout, [&] { return snap_.sequence > since; });
    return snap_;
}

std::uint64_t Gateway::rejected_count() const {
    std::lock_guard lock(mu_);
    return rejected_;
}

std::string format_utc(std::chrono::system_clock::time_point tp) {
    const std::time_t secs = std::chrono::system_clock::to_time_t(tp);
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        tp.time_since_epoch()) %
                    1000;
    std::tm tm{};
    gmtime_r(&secs, &tm);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ",
                  tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour,
                  tm.tm_min, tm.tm_sec, static_cast<int>(ms.count()));
    return buf;
}

std::string snapshot_to_json(const GatewaySnapshot& s) {
    nlohmann::ordered_json doc;
    doc["sequence"] = s.sequence;
    doc["wall_time"] = format_utc(s.wall_time);
    nlohmann::ordered_json phases = nlohmann::ordered_json::array();
    for (const PhaseColor c : s.state.phases) phases.push_back(std::string(to_string(c)));
    doc["phases"] = std::move(phases);
    doc["packets_seen"] = s.packets_seen;
    doc["changes_seen"] = s.changes_seen;
    return doc.dump();
}

std::string health_to_json(const GatewaySnapshot& s, std::uint64_t rejected) {
    nlohmann::ordered_json doc;
    doc["sequence"] = s.sequence;
    doc["packets_seen"] = s.packets_seen;
    doc["changes_seen"] = s.changes_seen;
    doc["rejected"] = rejected;
    return doc.dump();
}

PortInUse::PortInUse(const std::string& what, int port)
    : Error(what + " (port " + std::to_string(port) + ")") {}

UdpIngestServer::UdpIngestServer(Gateway& gateway, std::string bind_address,
                                 std::uint16_t port)
    : gateway_(gateway), bind_address_(std::move(bind_address)), requested_port_(port) {}

UdpIngestServer::~UdpIngestServer() { stop(); }

void UdpIngestServer::start() {
    fd_ = ::socket(AF_INET, SOCK_DGRAM, 0);
    if (fd_ < 0) throw Error("socket() failed: " + std::string(std::strerror(errno)));

    // Large receive buffer so datagram bursts at 10 Hz x many sources survive
    // scheduler hiccups.
    int rcvbuf = 4 * 1024 * 1024;
    ::setsockopt(fd_, SOL_SOCKET, SO_RCVBUF, &rcvbuf, sizeof(rcvbuf));

    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(requested_port_);
    if (::inet_pton(AF_INET, bind_address_.c_str(), &addr.sin_addr) != 1) {
        ::close(fd_);
        fd_ = -1;
        throw Error("invalid bind address: " + bind_address_);
    }
    if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
        const int err = errno;
        ::close(fd_);
        fd_ = -1;
        if (err == EADDRINUSE) throw PortInUse("UDP bind failed", requested_port_);
        throw Error("bind() failed: " + std::string(std::strerror(err)));
    }

    sockaddr_in bound{};
    socklen_t len = sizeof(bound);
    ::getsockname(fd_, reinterpret_cast<sockaddr*>(&bound), &len);
    bound_port_ = ntohs(bound.sin_port);

    running_ = true;
    thread_ = std::thread([this] { run_loop(); });
}

void UdpIngestServer::run_loop() {
    std::array<std::uint8_t, 2048> buf;
    while (running_) {
        pollfd pfd{fd_, POLLIN, 0};
        const int rc = ::poll(&pfd, 1, 100);
        if (rc <= 0) continue;
        const ssize_t got = ::recvfrom(fd_, buf.data(), buf.size(), 0, nullptr, nullptr);
        if (got < 0) continue;
        gateway_.ingest_datagram({buf.data(), static_cast<std::size_t>(got)},
                                 std::chrono::steady_clock::now());
    }
}

void UdpIngestServer::stop() {
    if (!running_.exchange(false)) {
        if (fd_ >= 0) {
            ::close(fd_);
            fd_ = -1;
        }
        return;
    }
    if (thread_.joinable()) thread_.join();
    if (fd_ >= 0) {
        ::close(fd_);
        fd_ = -1;
    }
}

}  // namespace cvkit::spat
