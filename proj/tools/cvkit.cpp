// cvkit — connected-vehicle toolkit command line.
//
// Subcommands:
//   simulate  partition a BSM CSV per timeframe and export a timeline file
//   generate  synthesize a BSM dataset in the Ann Arbor test rectangle
//   bench     per-stage timings vs vehicle count, with log-log slopes
//   density   mean partition count vs vehicle density
//   spat      serve | emulate | watch — the live SPaT pipeline roles

#include <atomic>
#include <chrono>
#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "cvkit/bench.hpp"
#include "cvkit/bsm.hpp"
#include "cvkit/datagen.hpp"
#include "cvkit/timeline.hpp"
#include "cvkit/spat/emulator.hpp"
#include "cvkit/spat/gateway.hpp"
#include "cvkit/spat/watch.hpp"

namespace {

std::atomic<bool> g_stop{false};

void handle_signal(int) { g_stop = true; }

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw cvkit::Error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw cvkit::Error("cannot write " + path);
    out << content;
}

int cmd_simulate(const std::string& input, double range_m, const std::string& output) {
    const auto start = std::chrono::steady_clock::now();
    std::vector<cvkit::Timeframe> frames;
    try {
        frames = cvkit::group_into_timeframes(cvkit::parse_bsm_csv(read_file(input)));
    } catch (const cvkit::Error& e) {
        throw cvkit::Error(input + ": " + e.what());
    }

    std::ofstream out(output, std::ios::binary);
    if (!out) throw cvkit::Error("cannot write " + output);
    const cvkit::TimelineSummary summary = cvkit::write_timeline(out, frames, range_m);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    std::cout << "frames=" << summary.frames << " vehicles=" << summary.vehicle_rows
              << " mean_partitions=" << summary.mean_partitions
              << " runtime_s=" << seconds << '\n';
    return 0;
}

int cmd_generate(const cvkit::GenConfig& cfg, const std::string& output) {
    const std::string csv = cvkit::generate_dataset(cfg);
    write_file(output, csv);
    const auto frames = cvkit::group_into_timeframes(cvkit::parse_bsm_csv(csv));
    std::cout << "vehicles_per_frame=" << cfg.n_vehicles << " frames=" << frames.size()
              << " bytes=" << csv.size() << '\n';
    return 0;
}

int cmd_bench(const std::vector<int>& ns, std::uint64_t seed, double range_m,
              const std::string& output) {
    const auto timings = cvkit::run_benchmark(ns, seed, range_m);

    const double area = cvkit::rectangle_area_km2(cvkit::ann_arbor_rect());
    std::vector<cvkit::ResultRow> rows;
    rows.reserve(timings.size());
    std::vector<std::pair<double, double>> distance_pts;
    std::vector<std::pair<double, double>> closure_pts;
    for (const auto& t : timings) {
        rows.push_back(cvkit::to_result_row(t, area));
        distance_pts.emplace_back(t.n, t.distance_us);
        closure_pts.emplace_back(t.n, t.closure_us);
    }
    std::ofstream out(output, std::ios::binary);
    if (!out) throw cvkit::Error("cannot write " + output);
    cvkit::write_results_csv(out, rows);

    if (timings.size() >= 3) {
        std::cout << "distance_slope=" << cvkit::fit_loglog_slope(distance_pts)
                  << " closure_slope=" << cvkit::fit_loglog_slope(closure_pts) << '\n';
    } else {
        std::cerr << "note: need >= 3 vehicle counts for slope fits\n";
    }
    std::cout << "results=" << output << '\n';
    return 0;
}

int cmd_density(const std::vector<int>& ns, int trials, double range_m,
                std::uint64_t seed, bool parallel, const std::string& output) {
    const auto samples = cvkit::partition_density_sweep(ns, trials, range_m, seed, parallel);
    std::vector<cvkit::ResultRow> rows;
    rows.reserve(samples.size());
    for (const auto& s : samples) {
        rows.push_back(cvkit::to_result_row(s));
        std::cout << "n=" << s.n << " density=" << s.density
                  << " mean_partitions=" << s.mean_partitions << '\n';
    }
    std::ofstream out(output, std::ios::binary);
    if (!out) throw cvkit::Error("cannot write " + output);
    cvkit::write_results_csv(out, rows);
    std::cout << "results=" << output << '\n';
    return 0;
}

int cmd_spat_serve(const std::string& bind, std::uint16_t udp_port, int http_port,
                   double duration_s) {
    cvkit::spat::Gateway gateway;
    cvkit::spat::UdpIngestServer udp(gateway, bind, udp_port);
    cvkit::spat::HttpGatewayServer http(gateway, bind, http_port);
    udp.start();
    http.start();
    std::cerr << "gateway listening: udp=" << bind << ':' << udp.port()
              << " http=" << bind << ':' << http.port() << '\n';

    const auto deadline = std::chrono::steady_clock::now() +
                          std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                              std::chrono::duration<double>(duration_s));
    while (!g_stop) {
        if (duration_s > 0 && std::chrono::steady_clock::now() >= deadline) break;
        std::this_thread::sleep_for(std::chrono::milliseconds(100));
    }

    http.stop();
    udp.stop();
    const auto snap = gateway.current_snapshot();
    std::cerr << "gateway stopping: packets_seen=" << snap.packets_seen
              << " changes_seen=" << snap.changes_seen
              << " rejected=" << gateway.rejected_count() << '\n';
    return 0;
}

int cmd_spat_emulate(const std::string& target, double rate_hz,
                     const std::string& cycle_file, double duration_s,
                     const std::string& transition_log, bool pedestrian) {
    cvkit::spat::EmulatorOptions opts;
    const auto colon = target.rfind(':');
    if (colon == std::string::npos) {
        throw cvkit::Error("--target must be host:port, got '" + target + "'");
    }
    opts.target_host = target.substr(0, colon);
    opts.target_port = static_cast<std::uint16_t>(std::stoi(target.substr(colon + 1)));
    opts.rate_hz = rate_hz;
    opts.pedestrian = pedestrian;
    if (!cycle_file.empty()) {
        opts.cycle = cvkit::spat::cycle_from_json(read_file(cycle_file));
    }

    std::ofstream log;
    if (!transition_log.empty()) {
        log.open(transition_log, std::ios::binary | std::ios::trunc);
        if (!log) throw cvkit::Error("cannot write " + transition_log);
        opts.on_transition = [&log](const cvkit::spat::TransitionRecord& rec) {
            cvkit::spat::append_transition(log, rec);
        };
    }

    const auto report = cvkit::spat::emulate_controller(
        opts,
        std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::duration<double>(duration_s)),
        &g_stop);
    std::cout << "packets_sent=" << report.packets_sent
              << " transitions=" << report.transitions
              << " send_errors=" << report.send_errors << '\n';
    return 0;
}

int cmd_spat_watch(const std::string& url, double duration_s,
                   const std::string& transition_log) {
    cvkit::spat::WatchOptions opts;
    opts.base_url = url;
    opts.duration = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::duration<double>(duration_s));
    opts.live_out = &std::cout;
    if (!transition_log.empty()) {
        opts.transitions = [transition_log] {
            return cvkit::spat::read_transition_log(transition_log);
        };
    } else {
        std::cerr << "note: no --transition-log; changes are shown without latency\n";
        opts.transitions = nullptr;
    }

    const cvkit::spat::LatencyStats stats = cvkit::spat::watch_client(opts);
    std::cout << "samples=" << stats.samples << " median_ms=" << stats.median_ms
              << " p95_ms=" << stats.p95_ms << " max_ms=" << stats.max_ms << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);

    CLI::App app{"cvkit — connected-vehicle connectivity and SPaT toolkit"};
    app.require_subcommand(1);

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Partition a BSM CSV and export a timeline");
    std::string sim_input;
    std::string sim_output;
    double sim_range = 1000.0;
    simulate->add_option("--input", sim_input, "BSM CSV input path")->required();
    simulate->add_option("--range", sim_range, "DSRC range in meters")
        ->default_val(1000.0)
        ->check(CLI::PositiveNumber);
    simulate->add_option("--output", sim_output, "Timeline output path (line-delimited JSON)")
        ->required();

    // generate
    auto* generate = app.add_subcommand("generate", "Generate a synthetic BSM dataset");
    cvkit::GenConfig gen_cfg;
    int gen_frames = -1;
    std::vector<double> gen_rect;
    std::string gen_output;
    generate->add_option("--n", gen_cfg.n_vehicles, "Vehicles per timeframe")
        ->required()
        ->check(CLI::PositiveNumber);
    generate->add_option("--frames", gen_frames,
                         "Timeframe count (omit to auto-fit the file cap)")
        ->check(CLI::PositiveNumber);
    generate->add_option("--seed", gen_cfg.seed, "Generator seed")->default_val(0);
    generate->add_option("--max-kb", gen_cfg.max_file_kb, "File size cap in KB (auto mode)")
        ->default_val(4500.0)
        ->check(CLI::PositiveNumber);
    generate
        ->add_option("--rect", gen_rect,
                     "lat_min lat_max lon_min lon_max (default: Ann Arbor rectangle)")
        ->expected(4);
    generate->add_option("--output", gen_output, "CSV output path")->required();

    // bench
    auto* bench = app.add_subcommand("bench", "Per-stage timings vs vehicle count");
    std::vector<int> bench_ns{50, 100, 200, 400, 800};
    std::uint64_t bench_seed = 0;
    double bench_range = 1000.0;
    std::string bench_output = "bench_results.csv";
    bench->add_option("--ns", bench_ns, "Vehicle counts to measure")->delimiter(',');
    bench->add_option("--seed", bench_seed, "Dataset seed")->default_val(0);
    bench->add_option("--range", bench_range, "DSRC range in meters")->default_val(1000.0);
    bench->add_option("--output", bench_output, "Results CSV path");

    // density
    auto* density = app.add_subcommand("density", "Mean partitions vs vehicle density");
    std::vector<int> density_ns{17, 35, 70, 174, 348};
    int density_trials = 50;
    std::uint64_t density_seed = 0;
    double density_range = 1000.0;
    bool density_parallel = false;
    std::string density_output = "density_results.csv";
    density->add_option("--ns", density_ns, "Vehicle counts to sweep")->delimiter(',');
    density->add_option("--trials", density_trials, "Timeframes per count")
        ->default_val(50)
        ->check(CLI::PositiveNumber);
    density->add_option("--seed", density_seed, "Generator seed")->default_val(0);
    density->add_option("--range", density_range, "DSRC range in meters")->default_val(1000.0);
    density->add_flag("--parallel", density_parallel, "Run trials on all cores");
    density->add_option("--output", density_output, "Results CSV path");

    // spat
    auto* spat = app.add_subcommand("spat", "SPaT pipeline roles");
    spat->require_subcommand(1);

    auto* serve = spat->add_subcommand("serve", "UDP-to-HTTP SPaT gateway");
    std::string serve_bind = "0.0.0.0";
    std::uint16_t serve_udp_port = 5010;
    int serve_http_port = 8080;
    double serve_duration = 0.0;
    serve->add_option("--bind", serve_bind, "Bind address")->default_str("0.0.0.0");
    serve->add_option("--udp-port", serve_udp_port, "UDP ingest port")->default_val(5010);
    serve->add_option("--http-port", serve_http_port, "HTTP port")->default_val(8080);
    serve->add_option("--duration", serve_duration,
                      "Seconds to run (0 = until interrupted)")
        ->default_val(0.0);

    auto* emulate = spat->add_subcommand("emulate", "Traffic-controller emulator");
    std::string emu_target = "127.0.0.1:5010";
    double emu_rate = 10.0;
    std::string emu_cycle_file;
    double emu_duration = 30.0;
    std::string emu_translog;
    bool emu_pedestrian = false;
    emulate->add_option("--target", emu_target, "Gateway UDP address host:port")
        ->default_str("127.0.0.1:5010");
    emulate->add_option("--rate-hz", emu_rate, "Datagrams per second")
        ->default_val(10.0)
        ->check(CLI::PositiveNumber);
    emulate->add_option("--cycle-file", emu_cycle_file, "JSON cycle description");
    emulate->add_option("--duration", emu_duration, "Seconds to run")->default_val(30.0);
    emulate->add_option("--transition-log", emu_translog,
                        "File receiving one line per state transition");
    emulate->add_flag("--pedestrian", emu_pedestrian, "Emit 245-byte frames");

    auto* watch = spat->add_subcommand("watch", "Headless latency-measuring client");
    std::string watch_url = "http://127.0.0.1:8080";
    double watch_duration = 30.0;
    std::string watch_translog;
    watch->add_option("--url", watch_url, "Gateway base URL")
        ->default_str("http://127.0.0.1:8080");
    watch->add_option("--duration", watch_duration, "Seconds to watch")->default_val(30.0);
    watch->add_option("--transition-log", watch_translog,
                      "Emulator transition log for latency matching");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*simulate) return cmd_simulate(sim_input, sim_range, sim_output);
        if (*generate) {
            if (gen_frames > 0) gen_cfg.n_timeframes = gen_frames;
            if (!gen_rect.empty()) {
                gen_cfg.rect = cvkit::GeoRect(gen_rect[0], gen_rect[1], gen_rect[2], gen_rect[3]);
            }
            return cmd_generate(gen_cfg, gen_output);
        }
        if (*bench) return cmd_bench(bench_ns, bench_seed, bench_range, bench_output);
        if (*density) {
            return cmd_density(density_ns, density_trials, density_range, density_seed,
                               density_parallel, density_output);
        }
        if (*serve) return cmd_spat_serve(serve_bind, serve_udp_port, serve_http_port,
                                          serve_duration);
        if (*emulate) {
            return cmd_spat_emulate(emu_target, emu_rate, emu_cycle_file, emu_duration,
                                    emu_translog, emu_pedestrian);
        }
        if (*watch) return cmd_spat_watch(watch_url, watch_duration, watch_translog);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
