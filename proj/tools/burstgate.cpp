#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "burstgate/engine.hpp"
#include "burstgate/errors.hpp"
#include "burstgate/metrics.hpp"
#include "burstgate/queue.hpp"
#include "burstgate/report.hpp"
#include "burstgate/scenario.hpp"
#include "burstgate/traffic.hpp"

namespace {

using namespace burstgate;

unsigned threads_from_env() {
    const char* v = std::getenv("BURSTGATE_THREADS");
    if (!v || !*v) return 0; // 0 = auto
    char* end = nullptr;
    const long n = std::strtol(v, &end, 10);
    if (end == v || *end || n < 0)
        throw ConfigError("BURSTGATE_THREADS must be a non-negative integer");
    return unsigned(n);
}

void check_delay_sweep(const std::vector<double>& sweep) {
    for (std::size_t i = 0; i < sweep.size(); ++i) {
        if (sweep[i] < 0)
            throw ConfigError("delay sweep values must be >= 0");
        if (i > 0 && !(sweep[i - 1] < sweep[i]))
            throw ConfigError("delay sweep values must be strictly increasing");
    }
}

int cmd_run(const std::string& scenario_path, std::uint32_t iterations, std::uint64_t seed,
            const std::string& out_dir, const std::vector<double>& delay_sweep) {
    const Scenario s = load_scenario(scenario_path);
    RunConfig cfg;
    cfg.iterations = iterations;
    cfg.master_seed = seed;
    if (!delay_sweep.empty()) {
        check_delay_sweep(delay_sweep);
        cfg.mos_delay_sweep_ms = delay_sweep;
    }
    const auto results = run_many(s, cfg, threads_from_env());
    const auto files = write_run_outputs(out_dir, s, results, cfg);
    for (const auto& f : files) std::printf("wrote %s\n", f.c_str());
    return 0;
}

int cmd_sweep(const std::string& scenario_path, const std::string& param,
              const std::vector<double>& values, std::uint32_t iterations, std::uint64_t seed,
              const std::string& out_dir) {
    const Scenario s = load_scenario(scenario_path);
    RunConfig cfg;
    cfg.iterations = iterations;
    cfg.master_seed = seed;
    const SweepParameter p = param == "buffer" ? SweepParameter::buffer_limit
                                               : SweepParameter::capacity_bps;
    const auto points = sweep(s, p, values, cfg, threads_from_env());

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec)
        throw ConfigError("cannot create output directory " + out_dir + ": " + ec.message());
    const std::string path = (std::filesystem::path(out_dir) / "sweep.csv").string();
    write_text_file(path, sweep_csv(points));
    std::printf("wrote %s\n", path.c_str());
    return 0;
}

int cmd_sizing(const std::string& rule, std::optional<double> capacity_bps,
               std::optional<double> rtt_s, std::optional<std::uint32_t> flows,
               std::optional<std::uint32_t> packets) {
    if (rule == "tiny") {
        std::printf("%u packets\n", tiny_buffer_packets(packets));
        return 0;
    }
    if (!capacity_bps)
        throw ConfigError("--capacity-bps is required for rule \"" + rule + "\"");
    if (!rtt_s)
        throw ConfigError("--rtt-s is required for rule \"" + rule + "\"");

    std::uint64_t bytes = 0;
    if (rule == "bdp") {
        bytes = bdp_bytes(*capacity_bps, *rtt_s);
    } else { // small
        if (!flows)
            throw ConfigError("--flows is required for rule \"small\"");
        bytes = small_buffer_bytes(*capacity_bps, *rtt_s, *flows);
    }
    std::printf("%llu bytes (%llu packets @1500B)\n", (unsigned long long)bytes,
                (unsigned long long)(bytes / 1500));
    return 0;
}

int cmd_mos(double loss_percent, double delay_ms, const EModelParams& p) {
    if (loss_percent < 0 || loss_percent > 100)
        throw ConfigError("--loss-percent must lie in [0, 100]");
    if (delay_ms < 0)
        throw ConfigError("--delay-ms must be >= 0");
    // The standalone calculator scores exactly the pair it is given; the
    // codec allowance only applies inside the simulation pipeline.
    const double r = r_factor(loss_percent, delay_ms, p);
    const double mos = mos_from_r(r);
    std::printf("R = %.2f\nMOS = %.2f\nband = %s\n", r, mos, to_string(quality_band(mos)));
    return 0;
}

int cmd_table1(bool csv) {
    if (csv) {
        std::printf("resolution,compression_kbytes,packets_per_burst\n");
        for (const auto& row : burst_table())
            std::printf("%s,%u,%u\n", row.resolution.c_str(), row.quality, row.packets);
    } else {
        std::printf("%-10s %-20s %s\n", "resolution", "compression (kbytes)", "packets/burst");
        for (const auto& row : burst_table())
            std::printf("%-10s %-20u %u\n", row.resolution.c_str(), row.quality, row.packets);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"burstgate: drop-tail bottleneck simulator for multimedia flows"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "simulate a scenario and write CSV reports");
    std::string run_scenario, run_out = "out";
    std::uint32_t run_iterations = 40;
    std::uint64_t run_seed = 1;
    std::vector<double> run_delays;
    run->add_option("--scenario", run_scenario, "scenario JSON file")->required();
    run->add_option("--iterations", run_iterations, "independent repetitions");
    run->add_option("--seed", run_seed, "master seed");
    run->add_option("--out", run_out, "output directory");
    run->add_option("--mos-delays", run_delays,
                    "network delay sweep for mos_cdf.csv (ms, strictly increasing)");

    // sweep
    auto* swp = app.add_subcommand("sweep", "re-run a scenario across parameter values");
    std::string swp_scenario, swp_param, swp_out = "out";
    std::vector<double> swp_values;
    std::uint32_t swp_iterations = 40;
    std::uint64_t swp_seed = 1;
    swp->add_option("--scenario", swp_scenario, "scenario JSON file")->required();
    swp->add_option("--param", swp_param, "buffer | capacity")
        ->required()
        ->check(CLI::IsMember({"buffer", "capacity"}));
    swp->add_option("--values", swp_values, "parameter values")->required()->expected(-1);
    swp->add_option("--iterations", swp_iterations, "independent repetitions");
    swp->add_option("--seed", swp_seed, "master seed");
    swp->add_option("--out", swp_out, "output directory");

    // sizing
    auto* siz = app.add_subcommand("sizing", "buffer sizing calculators");
    std::string siz_rule;
    std::optional<double> siz_capacity, siz_rtt;
    std::optional<std::uint32_t> siz_flows, siz_packets;
    siz->add_option("--rule", siz_rule, "bdp | small | tiny")
        ->required()
        ->check(CLI::IsMember({"bdp", "small", "tiny"}));
    siz->add_option("--capacity-bps", siz_capacity, "link capacity (bits/s)");
    siz->add_option("--rtt-s", siz_rtt, "round-trip time (s)");
    siz->add_option("--flows", siz_flows, "concurrent long-lived flows (rule small)");
    siz->add_option("--packets", siz_packets, "preferred size for rule tiny (10..99)");

    // mos
    auto* mos = app.add_subcommand("mos", "standalone E-model calculator");
    double mos_loss = 0.0, mos_delay = 0.0;
    EModelParams emodel;
    mos->add_option("--loss-percent", mos_loss, "packet loss (0..100)")->required();
    mos->add_option("--delay-ms", mos_delay, "one-way delay (ms)")->required();
    mos->add_option("--r0", emodel.r0, "base transmission rating");
    mos->add_option("--ie", emodel.ie, "codec equipment impairment");
    mos->add_option("--bpl", emodel.bpl, "codec loss robustness");
    mos->add_option("--is", emodel.is_impairment, "simultaneous impairment");
    mos->add_option("--advantage", emodel.advantage, "advantage factor");

    // table1
    auto* tbl = app.add_subcommand("table1", "camera burst-length table");
    bool tbl_csv = false;
    tbl->add_flag("--csv", tbl_csv, "emit CSV instead of aligned text");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed())
            return cmd_run(run_scenario, run_iterations, run_seed, run_out, run_delays);
        if (swp->parsed())
            return cmd_sweep(swp_scenario, swp_param, swp_values, swp_iterations, swp_seed,
                             swp_out);
        if (siz->parsed())
            return cmd_sizing(siz_rule, siz_capacity, siz_rtt, siz_flows, siz_packets);
        if (mos->parsed())
            return cmd_mos(mos_loss, mos_delay, emodel);
        if (tbl->parsed())
            return cmd_table1(tbl_csv);
    } catch (const InvariantViolation& e) {
        std::fprintf(stderr, "invariant violation: %s\n", e.what());
        return 2;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
