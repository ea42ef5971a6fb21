#include "behc/cli.hpp"

#include <doctest.h>

#include <sstream>

using namespace behc::cli;

TEST_CASE("q parsing") {
    auto qs = parse_q_list("0.1,0.5,0.9");
    CHECK(qs.size() == 3);
    CHECK(qs[1] == doctest::Approx(0.5));
    CHECK_THROWS(parse_q_list("1.5"));
    CHECK_THROWS(parse_q_list(""));

    auto grid = parse_q_range("0.1:0.5:0.2");
    CHECK(grid.size() == 3);
    CHECK(grid[2] == doctest::Approx(0.5));
    CHECK_THROWS(parse_q_range("0.5:0.1"));
}

TEST_CASE("table endpoints are exact rows") {
    RunConfig cfg;
    cfg.command = "table";
    cfg.qs = {0.0};
    std::ostringstream out0;
    cmd_table(cfg, out0);
    std::string body = out0.str().substr(out0.str().find('\n') + 1);
    CHECK(body == "0.0000,0.0000,0.0000,0.0000,0.0000,0.0000,0.0000,0.0000,0.0000,0.0000,0.0000\n");

    cfg.qs = {1.0};
    std::ostringstream out1;
    cmd_table(cfg, out1);
    body = out1.str().substr(out1.str().find('\n') + 1);
    CHECK(body == "1.0000,1.0000,1.0000,1.0000,1.0000,1.0000,1.0000,1.0000,1.0000,1.0000,1.0000\n");
}

TEST_CASE("sweep output is deterministic and monotone") {
    RunConfig cfg;
    cfg.command = "sweep";
    cfg.qs = {0.1, 0.3, 0.5, 0.7, 0.9};
    cfg.quantities = {"bounds", "rates"};
    cfg.n_hi = 32;
    std::ostringstream a, b;
    cmd_sweep(cfg, a);
    cmd_sweep(cfg, b);
    CHECK(a.str() == b.str());

    // columns are nondecreasing in q
    std::istringstream in(a.str());
    std::string line;
    std::getline(in, line); // header
    std::vector<double> prev;
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::stringstream ls(line);
        std::string tok;
        while (std::getline(ls, tok, ',')) row.push_back(std::stod(tok));
        if (!prev.empty())
            for (std::size_t i = 1; i < row.size(); ++i) CHECK(row[i] >= prev[i] - 1e-4);
        prev = row;
    }
}

TEST_CASE("json schema carries values with uncertainty fields") {
    RunConfig cfg;
    cfg.command = "sweep";
    cfg.qs = {0.5};
    cfg.quantities = {"bounds"};
    cfg.format = Format::Json;
    std::ostringstream out;
    cmd_sweep(cfg, out);
    auto s = out.str();
    CHECK(s.find("\"schema\": \"behc-results/1\"") != std::string::npos);
    CHECK(s.find("C_UB_leakage") != std::string::npos);
    CHECK(s.find("solver_tol") != std::string::npos);
}

TEST_CASE("optimal-n sweep column") {
    RunConfig cfg;
    cfg.command = "sweep";
    cfg.qs = {0.1, 0.7};
    cfg.quantities = {"optimal-n"};
    std::ostringstream out;
    cmd_sweep(cfg, out);
    std::istringstream in(out.str());
    std::string header, r1, r2;
    std::getline(in, header);
    std::getline(in, r1);
    std::getline(in, r2);
    CHECK(header == "q,N_opt");
    CHECK(r1 == "0.1000,13.0000");
    CHECK(r2 == "0.7000,5.0000");
}

TEST_CASE("verify quick suite passes and the fault path fails") {
    RunConfig cfg;
    cfg.command = "verify";
    cfg.quick = true;
    std::ostringstream out;
    CHECK(cmd_verify(cfg, out) == 0);

    cfg.inject_fault = true;
    std::ostringstream out2;
    CHECK(cmd_verify(cfg, out2) > 0);
    CHECK(out2.str().find("[FAIL]") != std::string::npos);
}

TEST_CASE("asymptotic command emits the ratio sweep") {
    RunConfig cfg;
    cfg.command = "asymptotic";
    cfg.qs = {0.1};
    std::ostringstream out;
    cmd_asymptotic(cfg, out);
    auto s = out.str();
    CHECK(s.find("ratio") != std::string::npos);
    CHECK(s.find("1.1218") != std::string::npos);
}
