#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <thread>

#include "cvkit/errors.hpp"
#include "cvkit/spat/codec.hpp"

namespace cvkit::spat {

// Latest decoded intersection state plus counters. sequence bumps by exactly
// one per state change; packets_seen counts every well-formed datagram.
struct GatewaySnapshot {
    IntersectionState state;  // all-Red sentinel before the first packet
    std::uint64_t sequence = 0;
    std::chrono::steady_clock::time_point ingest_time{};
    std::chrono::system_clock::time_point wall_time{};
    std::uint64_t packets_seen = 0;
    std::uint64_t changes_seen = 0;
};

enum class IngestOutcome { Changed, Unchanged, Rejected };

struct IngestResult {
    IngestOutcome outcome = IngestOutcome::Rejected;
    GatewaySnapshot snapshot;  // state after this datagram
    std::string error;         // set when Rejected
};

// Single-writer / many-reader latest-value store. Everything lives in
// memory; no file is touched on the ingest or snapshot path. Readers copy
// the snapshot under a short lock, so the writer is never blocked for more
// than one copy.
class Gateway {
public:
    // Decodes the datagram and publishes a new snapshot when the derived
    // state differs from the current one. Malformed datagrams are counted
    // and dropped without touching the state.
    IngestResult ingest_datagram(std::span<const std::uint8_t> bytes,
                                 std::chrono::steady_clock::time_point recv_time);

    GatewaySnapshot current_snapshot() const;

    // Returns immediately once sequence exceeds `since`, else blocks until a
    // change or the timeout and returns the snapshot current at that moment.
    GatewaySnapshot wait_for_change(std::uint64_t since,
                                    std::chrono::milliseconds timeout) const;

    std::uint64_t rejected_count() const;

private:
    mutable std::mutex mu_;
    mutable std::condition_variable cv_;
    GatewaySnapshot snap_;
    std::uint64_t rejected_ = 0;
};

// /spat response body; field names are part of the HTTP contract.
std::string snapshot_to_json(const GatewaySnapshot& s);
std::string health_to_json(const GatewaySnapshot& s, std::uint64_t rejected);

std::string format_utc(std::chrono::system_clock::time_point tp);

class PortInUse : public Error {
public:
    PortInUse(const std::string& what, int port);
};

// Blocking UDP receive loop on its own thread, feeding a Gateway.
class UdpIngestServer {
public:
    UdpIngestServer(Gateway& gateway, std::string bind_address, std::uint16_t port);
    ~UdpIngestServer();

    UdpIngestServer(const UdpIngestServer&) = delete;
    UdpIngestServer& operator=(const UdpIngestServer&) = delete;

    void start();  // throws PortInUse / Error
    void stop();

    std::uint16_t port() const { return bound_port_; }

private:
    void run_loop();

    Gateway& gateway_;
    std::string bind_address_;
    std::uint16_t requested_port_;
    std::uint16_t bound_port_ = 0;
    int fd_ = -1;
    std::thread thread_;
    std::atomic<bool> running_{false};
};

inline constexpr std::chrono::milliseconds kLongPollTimeout{5000};

// HTTP front end: GET /spat, GET /spat?since=<k> (long-poll), GET /health.
class HttpGatewayServer {
public:
    HttpGatewayServer(Gateway& gateway, std::string bind_address, int port);
    ~HttpGatewayServer();

    HttpGatewayServer(const HttpGatewayServer&) = delete;
    HttpGatewayServer& operator=(const HttpGatewayServer&) = delete;

    void start();  // throws PortInUse
    void stop();

    int port() const { return bound_port_; }

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    Gateway& gateway_;
    std::string bind_address_;
    int requested_port_;
    int bound_port_ = 0;
    std::thread thread_;
};

}  // namespace cvkit::spat
