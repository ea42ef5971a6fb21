#include "behc/rates.hpp"

#include "behc/closed_form.hpp"
#include "behc/rng.hpp"
#include "behc/timing.hpp"

#include <doctest.h>

#include <cmath>

using namespace behc;
using namespace behc::rates;

namespace {

// exhaustive simplex lattice maximum of H(p) - lambda * sum p c, step h
double gibbs_oracle(const std::vector<double>& c, double lambda, double h) {
    int M = static_cast<int>(std::lround(1.0 / h));
    int n = static_cast<int>(c.size());
    std::vector<double> plog(M + 1, 0.0);
    for (int i = 1; i <= M; ++i) plog[i] = -(i * h) * std::log2(i * h);
    double best = -1e300;
    std::vector<int> k(n, 0);
    // nested enumeration over the first n-1 coordinates
    std::function<void(int, int, double)> rec = [&](int idx, int left, double acc) {
        if (idx == n - 1) {
            double v = acc + plog[left] - lambda * c[idx] * left * h;
            best = std::max(best, v);
            return;
        }
        for (int ki = 0; ki <= left; ++ki)
            rec(idx + 1, left - ki, acc + plog[ki] - lambda * c[idx] * ki * h);
    };
    rec(0, M, 0.0);
    return best;
}

} // namespace

TEST_CASE("modulo rate basics") {
    CHECK(modulo_rate(0.5, 1).rate == 0.0);
    CHECK_THROWS(modulo_rate(0.0, 4));
    auto r = modulo_rate(0.5, 4);
    CHECK(r.converged);
    CHECK(r.rate == doctest::Approx(0.578604).epsilon(1e-5));
    // any feasible distribution lower-bounds the optimum; uniform U gives
    // H(U)/E[T] = 2/3.5 here
    auto ch = timing::build_channel({timing::MapKind::Modulo, 4}, 0.5, 3);
    auto uniform = prob::Pmf::uniform(0, 3);
    double uniform_rate = prob::entropy(uniform) / timing::expected_duration(uniform, ch);
    CHECK(uniform_rate == doctest::Approx(2.0 / 3.5).epsilon(1e-9));
    CHECK(r.rate >= uniform_rate - 1e-12);
    // costs match the channel build
    auto costs = modulo_costs(0.5, 4);
    for (int u = 0; u < 4; ++u) CHECK(costs[u] == doctest::Approx(ch.cost(u)).epsilon(1e-9));
}

TEST_CASE("dinkelbach certificate at the returned multiplier") {
    for (double q : {0.1, 0.5, 0.9}) {
        auto r = modulo_rate_best(q);
        auto c = modulo_costs(q, r.frame);
        double z = 0.0;
        for (double cu : c) z += std::exp2(-r.lambda * cu);
        CHECK(std::fabs(std::log2(z)) < 1e-8);
        CHECK(std::fabs(prob::entropy(r.p_u) - r.lambda * timing::expected_duration(
                            r.p_u, timing::build_channel({timing::MapKind::Modulo, r.frame}, q,
                                                          r.frame - 1))) < 1e-8);
    }
}

TEST_CASE("gibbs inner solution beats a simplex lattice search") {
    Rng rng(17);
    for (double q : {0.2, 0.5, 0.8}) {
        for (int N : {2, 3, 4}) {
            auto c = modulo_costs(q, N);
            for (int trial = 0; trial < 2; ++trial) {
                double lambda = 0.2 + rng.uniform();
                double closed = 0.0;
                for (double cu : c) closed += std::exp2(-lambda * cu);
                closed = std::log2(closed); // value of max H - lambda E[c]
                double h = N == 4 ? 2e-3 : 1e-3;
                double lattice = gibbs_oracle(c, lambda, h);
                CHECK(closed >= lattice - 1e-12);
                CHECK(closed - lattice < 1e-3);
            }
        }
    }
}

TEST_CASE("modulo best-frame regression") {
    auto r = modulo_rate_best(0.5);
    CHECK(r.rate == doctest::Approx(0.593910).epsilon(1e-5));
    CHECK(r.frame == 6);
    CHECK(modulo_rate_best(1.0).rate == 1.0);
}

TEST_CASE("extended rate reduces to modulo when support is restricted") {
    for (double q : {0.3, 0.6}) {
        int N = 5;
        auto mod = modulo_rate(q, N);
        auto ext = extended_rate(q, N, N - 1);
        // same support: the extended optimizer may still use u in [0, 2N)
        // after growth, so compare through a fixed-support solve
        CHECK(ext.rate >= mod.rate - 1e-6);
    }
    // direct fixed-support check via the channel: Dinkelbach on Extended(N)
    // with u_max = N-1 equals the modulo solution
    double q = 0.4;
    int N = 4;
    auto mod = modulo_rate(q, N);
    auto chm = timing::build_channel({timing::MapKind::Modulo, N}, q, N - 1);
    double direct = prob::entropy(mod.p_u) / timing::expected_duration(mod.p_u, chm);
    CHECK(direct == doctest::Approx(mod.rate).epsilon(1e-9));
}

TEST_CASE("extended best-frame values") {
    auto r5 = extended_rate_best(0.5);
    CHECK(std::fabs(r5.rate - 0.6033) < 1.5e-3);
    CHECK(r5.converged);
    auto r9 = extended_rate_best(0.9);
    CHECK(std::fabs(r9.rate - 0.8845) < 1.5e-3);
    CHECK(extended_rate_best(1.0).rate == 1.0);
}

TEST_CASE("ternary timing rates") {
    CHECK(ternary_timing_rate(0.0, Scheme::Modulo).rate == 0.0);
    CHECK(ternary_timing_rate(1.0, Scheme::Modulo).rate == 1.5849625007211562);
    auto mod = ternary_timing_rate(0.5, Scheme::Modulo, {1, 32});
    auto ext = ternary_timing_rate(0.5, Scheme::Extended, {1, 32});
    CHECK(ext.rate >= mod.rate - 1e-9);
    CHECK(mod.rate > closed_form::niid_ternary(0.5).value); // timing beats naive here
}

TEST_CASE("asymptotic construction") {
    auto r = asymptotic_ratio(0.1);
    CHECK(r.ratio == doctest::Approx(0.2600 / 0.2313).epsilon(5e-3));
    CHECK(r.witness_rate >= r.witness_lower - 1e-12);
    CHECK(r.witness_rate <= r.modulo + 1e-9);
    double prev = 1e9;
    for (double q : {0.1, 0.03, 0.01}) {
        auto rep = asymptotic_ratio(q);
        CHECK(rep.ratio < prev);
        CHECK(rep.witness_rate >= rep.witness_lower - 1e-12);
        prev = rep.ratio;
    }
}

TEST_CASE("frame sweep stops on a plateau but finds interior optima") {
    auto r = modulo_rate_best(0.2, {1, 256});
    CHECK(r.frame == 8);
    auto r2 = modulo_rate_best(0.05, {1, 256});
    CHECK(r2.frame == 20);
}
