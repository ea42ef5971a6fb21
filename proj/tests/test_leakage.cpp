#include "behc/leakage.hpp"

#include "behc/closed_form.hpp"
#include "behc/pmf.hpp"
#include "behc/rates.hpp"

#include <doctest.h>

#include <cmath>
#include <functional>

using namespace behc;
using namespace behc::leakage;

namespace {

double delta(double q, int t) { return prob::truncated_geom_gap(q, t); }

// exhaustive lattice maximum of the inner objective under prefix caps
double lattice_oracle(const std::vector<double>& cost, const std::vector<double>& caps, double h) {
    int T = static_cast<int>(cost.size());
    int M = static_cast<int>(std::lround(1.0 / h));
    std::vector<double> plog(M + 1, 0.0);
    for (int i = 1; i <= M; ++i) plog[i] = -(i * h) * std::log2(i * h);
    double best = -1e300;
    std::function<void(int, int, double)> rec = [&](int idx, int used, double acc) {
        if (idx == T - 1) {
            int left = M - used;
            best = std::max(best, acc + plog[left] - cost[idx] * left * h);
            return;
        }
        int cap = M - used;
        if (idx < static_cast<int>(caps.size())) {
            int by_cap = static_cast<int>(std::floor(caps[idx] / h + 1e-12)) - used;
            cap = std::min(cap, by_cap);
        }
        for (int ki = 0; ki <= cap; ++ki)
            rec(idx + 1, used + ki, acc + plog[ki] - cost[idx] * ki * h);
    };
    rec(0, 0, 0.0);
    return best;
}

} // namespace

TEST_CASE("inner sweep agrees with an unconstrained gibbs solution") {
    // caps loose enough to never bind: solution is proportional to 2^-cost
    std::vector<double> cost = {1.0, 0.5, 0.2, 0.8, 1.4};
    std::vector<double> caps = {0.9, 0.99, 0.999, 0.9999};
    auto sol = max_entropy_prefix_capped(cost, caps);
    double z = 0.0;
    for (double c : cost) z += std::exp2(-c);
    for (int t = 0; t < 5; ++t)
        CHECK(sol.p[t] == doctest::Approx(std::exp2(-cost[t]) / z).epsilon(1e-12));
    for (double g : sol.gamma) CHECK(g == 0.0);
    CHECK(sol.objective == doctest::Approx(std::log2(z)).epsilon(1e-12));
}

TEST_CASE("inner sweep matches the lattice oracle on small instances") {
    struct Instance { int t_max; double q, lambda, h; };
    for (auto [t_max, q, lambda, h] : {Instance{3, 0.5, 0.6, 1e-3},
                                       Instance{4, 0.5, 2.0, 1e-3},
                                       Instance{4, 0.3, 0.8, 1e-3},
                                       Instance{5, 0.05, 0.1, 1e-3}}) {
        std::vector<double> cost(t_max), caps(t_max - 1);
        for (int t = 1; t <= t_max; ++t) cost[t - 1] = delta(q, t) + lambda * t;
        for (int s = 1; s < t_max; ++s) caps[s - 1] = 1.0 - std::pow(1 - q, s);
        auto sol = max_entropy_prefix_capped(cost, caps);
        double oracle = lattice_oracle(cost, caps, h);
        CHECK(sol.objective >= oracle - 1e-12);
        CHECK(sol.objective - oracle < 2e-3);
        // feasibility of the sweep solution
        double cum = 0.0;
        for (int s = 1; s < t_max; ++s) {
            cum += sol.p[s - 1];
            CHECK(cum <= caps[s - 1] + 1e-12);
        }
    }
}

TEST_CASE("bound values on the table grid") {
    CHECK(std::fabs(leakage_ub(0.5).rate - 0.6164) < 1e-3);
    CHECK(std::fabs(leakage_ub(0.9).rate - 0.8846) < 1e-3);
    // regression pins for the exact optimum of the stated program
    CHECK(leakage_ub(0.1).rate == doctest::Approx(0.270787).epsilon(2e-5));
    CHECK(leakage_ub(0.3).rate == doctest::Approx(0.473957).epsilon(2e-5));
}

TEST_CASE("solution structure and KKT verification") {
    for (double q : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        auto sol = leakage_ub(q);
        CHECK(sol.converged);
        CHECK(sol.kkt_residual < 1e-6);
        CHECK(verify_kkt(sol, q) < 1e-6);
        // feasibility under the prefix law
        const auto& m = sol.p_t.mass();
        double cum = 0.0;
        for (std::size_t s = 1; s <= m.size(); ++s) {
            cum += m[s - 1];
            CHECK(cum <= 1.0 - std::pow(1 - q, static_cast<double>(s)) + 1e-9);
        }
        for (double g : sol.gamma) CHECK(g >= 0.0);
    }
}

TEST_CASE("perturbed solutions are rejected") {
    auto sol = leakage_ub(0.5);
    auto mass = sol.p_t.mass();
    std::size_t hi = 0;
    for (std::size_t i = 0; i < mass.size(); ++i)
        if (mass[i] > mass[hi]) hi = i;
    std::size_t lo = hi + 5 < mass.size() ? hi + 5 : hi - 5;
    mass[hi] -= 1e-3;
    mass[lo] += 1e-3;
    auto bad = sol;
    bad.p_t = prob::Pmf(1, mass);
    CHECK(verify_kkt(bad, 0.5) > 1e-4);
}

TEST_CASE("unconstrained regime is a pure gibbs law") {
    // at q = 0.5 no prefix constraint binds; p(t) must be exactly
    // A 2^{-Delta_t - lambda t}
    auto sol = leakage_ub(0.5);
    for (double g : sol.gamma) CHECK(g == 0.0);
    const auto& m = sol.p_t.mass();
    double ref = std::log2(m[0]) + delta(0.5, 1) + sol.lambda * 1;
    for (int t = 2; t <= 30; ++t) {
        double r = std::log2(m[t - 1]) + delta(0.5, t) + sol.lambda * t;
        CHECK(std::fabs(r - ref) < 1e-9);
    }
}

TEST_CASE("ternary bound") {
    CHECK(leakage_ub_ternary(0.0).rate == 0.0);
    CHECK(leakage_ub_ternary(1.0).rate == 1.5849625007211562);
    auto sol = leakage_ub_ternary(0.5);
    CHECK(sol.kkt_residual < 1e-6);
    auto ext = rates::ternary_timing_rate(0.5, rates::Scheme::Extended, {1, 24});
    CHECK(sol.rate >= ext.rate - 1e-6);
}

TEST_CASE("upper-bound property against achievable rates") {
    for (double q : {0.2, 0.5, 0.8}) {
        auto leak = leakage_ub(q);
        auto ext = rates::extended_rate_best(q, {1, 24});
        auto mod = rates::modulo_rate_best(q, {1, 64});
        CHECK(leak.rate >= ext.rate - 1e-6);
        CHECK(ext.rate >= mod.rate - 1e-6);
    }
}

TEST_CASE("crossover against the genie bound at large q") {
    for (double q : {0.3, 0.5, 0.7, 0.9})
        CHECK(leakage_ub(q).rate < closed_form::genie_ub_binary(q).value);
}

TEST_CASE("closed-form limits near the endpoints") {
    auto z = leakage_ub(0.0);
    CHECK(z.rate == 0.0);
    CHECK(z.closed_form_limit);
    auto o = leakage_ub(1.0);
    CHECK(o.rate == 1.0);
    CHECK(o.closed_form_limit);
}
