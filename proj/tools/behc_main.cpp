#include "behc/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Bounds, rates and simulation for unit-battery energy-harvesting channels"};
    app.fallthrough();
    app.set_config("--config", "", "key=value config file; flags override");

    behc::cli::RunConfig cfg;
    std::string q_list, q_range, n_range_txt, format = "csv", quantities;

    app.add_option("--q", q_list, "comma-separated q values");
    app.add_option("--q-range", q_range, "q grid as lo:hi:step");
    app.add_option("--arity", cfg.arity, "binary or ternary")
        ->check(CLI::IsMember({"binary", "ternary"}));
    app.add_option("--n-range", n_range_txt, "frame range as lo:hi (default 1:256)");
    app.add_option("--sim-n", cfg.sim_n, "simulation length for Shannon-strategy rates");
    app.add_option("--seeds", cfg.seeds, "number of independent seeds");
    app.add_option("--seed", cfg.seed, "base seed");
    app.add_option("--out", cfg.out, "output path (default stdout)");
    app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--threads", cfg.threads, "worker threads (0 = all cores)");
    app.add_flag("--quick", cfg.quick, "reduced grids for a fast pass");

    app.require_subcommand(1);
    auto* table = app.add_subcommand("table", "bounds and achievable rates, one row per q");
    auto* sweep = app.add_subcommand("sweep", "curve data over a q grid");
    sweep->add_option("--quantities", quantities,
                      "comma list from bounds,rates,extremes,optimal-n,shannon");
    auto* verify = app.add_subcommand("verify", "cross-module invariant checks");
    verify->add_flag("--inject-fault", cfg.inject_fault,
                     "corrupt a leakage solution to exercise the failure path");
    auto* simulate = app.add_subcommand("simulate", "run the physical channel");
    simulate->add_option("--scheme", cfg.scheme, "modulo, extended or ternary")
        ->check(CLI::IsMember({"modulo", "extended", "ternary"}));
    simulate->add_option("--frame", cfg.sim_frame, "frame length N");
    simulate->add_option("--symbols", cfg.sim_m, "number of symbols to send");
    simulate->add_option("--u-dist", cfg.u_dist, "uniform or geom:<ratio>");
    simulate->add_option("--u-support", cfg.u_support, "U support size (default N)");
    simulate->add_option("--dump", cfg.dump_path, "write the per-use trace here");
    auto* asym = app.add_subcommand("asymptotic", "genie/modulo ratio at small q");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!q_list.empty()) cfg.qs = behc::cli::parse_q_list(q_list);
        if (!q_range.empty()) cfg.qs = behc::cli::parse_q_range(q_range);
        if (!n_range_txt.empty()) {
            auto pos = n_range_txt.find(':');
            if (pos == std::string::npos) throw std::invalid_argument("bad --n-range, want lo:hi");
            cfg.n_lo = std::stoi(n_range_txt.substr(0, pos));
            cfg.n_hi = std::stoi(n_range_txt.substr(pos + 1));
        }
        cfg.format = format == "json" ? behc::cli::Format::Json : behc::cli::Format::Csv;
        if (!quantities.empty()) {
            std::stringstream ss(quantities);
            std::string tok;
            while (std::getline(ss, tok, ',')) cfg.quantities.push_back(tok);
        }
        if (table->parsed()) cfg.command = "table";
        if (sweep->parsed()) cfg.command = "sweep";
        if (verify->parsed()) cfg.command = "verify";
        if (simulate->parsed()) cfg.command = "simulate";
        if (asym->parsed()) cfg.command = "asymptotic";
        return behc::cli::run(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
