#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace behc::cli {

enum class Format { Csv, Json };

struct RunConfig {
    std::string command;
    std::vector<double> qs;          // explicit q list; empty = use defaults
    std::string arity = "binary";    // binary | ternary
    int n_lo = 1, n_hi = 256;        // frame range
    long long sim_n = 2'000'000;     // info-rate simulation length
    int seeds = 8;
    std::uint64_t seed = 1;
    std::string out;                 // output path; empty = stdout
    Format format = Format::Csv;
    bool quick = false;
    bool inject_fault = false;
    int threads = 0;                 // 0 = hardware concurrency
    // sweep
    std::vector<std::string> quantities; // bounds, rates, extremes, optimal-n, shannon
    // simulate
    std::string scheme = "modulo";   // modulo | extended | ternary
    int sim_frame = 4;
    long long sim_m = 100'000;
    std::string u_dist = "uniform";  // uniform | geom:<x>
    int u_support = 0;               // 0 = frame length
    std::string dump_path;
};

// Parses "a,b,c" into q values; validates [0,1].
std::vector<double> parse_q_list(const std::string& text);
// Parses "lo:hi:step" into an inclusive grid.
std::vector<double> parse_q_range(const std::string& text);

// Table of bounds and achievable rates, one row per q. Deterministic columns
// are solved exactly; the Shannon-strategy columns are simulation estimates
// with per-value standard errors (seeded, reproducible).
int cmd_table(const RunConfig& cfg, std::ostream& os);

// Curve data for plotting: bounds, rates, extreme-battery capacities,
// optimal frame lengths, and optionally the instantaneous Shannon-strategy
// rates, over a q grid.
int cmd_sweep(const RunConfig& cfg, std::ostream& os);

// Cross-module invariant suite; prints one line per check and returns the
// number of failures. quick trims the grids; inject_fault perturbs a leakage
// solution to exercise the failure path.
int cmd_verify(const RunConfig& cfg, std::ostream& os);

// Physical-channel simulation with decode statistics and optional trace dump.
int cmd_simulate(const RunConfig& cfg, std::ostream& os);

// Genie-over-modulo ratio sweep with the small-q witness construction.
int cmd_asymptotic(const RunConfig& cfg, std::ostream& os);

// Dispatch on cfg.command; writes to cfg.out or stdout. Returns process exit
// code (nonzero iff a verification check failed or arguments were invalid).
int run(const RunConfig& cfg);

} // namespace behc::cli
