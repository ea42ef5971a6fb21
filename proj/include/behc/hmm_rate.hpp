#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace behc::hmm {

enum class Arity { Binary, Ternary };

// Feasible Shannon strategies (functions battery-state -> input) are
// 0 = stay silent, and for each energized input symbol one strategy that
// sends it when the battery is full. Binary alphabet {(0,0),(0,1)} maps to
// {0,1}; ternary {(0,0),(0,+1),(0,-1)} maps to {0,1,2}.
struct StrategyCodebook {
    Arity arity = Arity::Binary;
    int order = 0;                  // Markov order k in {0,1,2}; 0 = i.i.d.
    std::vector<double> transition; // A^k x A row-major, rows sum to 1;
                                    // history h = u_{i-1} + A*u_{i-2} (recent in low digit)

    int alphabet() const { return arity == Arity::Binary ? 2 : 3; }
    int histories() const;
    std::vector<double> stationary_history() const;

    static StrategyCodebook iid(Arity arity, double p);
    static StrategyCodebook markov1_binary(double p_after_idle, double p_after_send);
    // order-2 rows indexed by (u_{i-1}, u_{i-2}); p1[h] = P[send | h]
    static StrategyCodebook markov2_binary(const std::array<double, 4>& p1);
    // ternary rows constrained symmetric between the two energized symbols;
    // parameters are the per-class total send probability split evenly
    static StrategyCodebook markov1_ternary(double p_after_idle, double p_after_send);
    static StrategyCodebook markov2_ternary(const std::array<double, 4>& p_send);
};

// Noiseless unit-battery channel kernel p(y, s'|u, s) under transmit-first
// ordering: y = u(s), s' = min(s - x + e, 1) with e ~ Bernoulli(q).
struct ChannelKernel {
    double q = 0.0;
    Arity arity = Arity::Binary;

    int outputs() const { return arity == Arity::Binary ? 2 : 3; }
    // output symbol index: 0 silent; binary 1 = "1"; ternary 1 = "+1", 2 = "-1"
    int output(int u, int s) const { return s == 1 ? u : 0; }
    bool consumes(int u, int s) const { return s == 1 && u != 0; }
    double p_next_full(int u, int s) const { return (s == 1 && u == 0) ? 1.0 : q; }
};

ChannelKernel build_kernel(double q, Arity arity);

struct InfoRateEstimate {
    double rate = 0.0;     // bits per channel use
    double stderr_ = 0.0;  // batch-means standard error of the single run
    long long n = 0;
};

// Simulation-based estimate of lim (1/n) I(U^n;Y^n): one long realization,
// log p(y^n|u^n) from the forward recursion over the hidden battery state and
// log p(y^n) from the recursion over the joint (battery, strategy history)
// state, both normalized per step with log accumulation.
InfoRateEstimate info_rate(const StrategyCodebook& cb, const ChannelKernel& k,
                           long long n, std::uint64_t seed);

struct SimRateResult {
    double rate = 0.0;
    double stderr_ = 0.0;          // across-seed standard error of the mean
    std::vector<double> params;    // optimized codebook parameters
    int order = 0;
    long long n = 0;
    int seeds = 0;
    bool analytic = false;         // q endpoint short-circuit
};

// Best i.i.d. Shannon-strategy rate: p-grid search refined once, final
// estimate averaged over independent seeds at the best point.
SimRateResult oiid_rate(double q, Arity arity, long long n = 2'000'000,
                        int n_seeds = 8, std::uint64_t seed0 = 1000);

// Markov codebooks of order 1 or 2: grid (order 1) or pattern search seeded
// from the lower order's optimum (order 2). Orders above 2 are rejected.
SimRateResult markov_rate(double q, Arity arity, int order, long long n = 2'000'000,
                          int n_seeds = 8, std::uint64_t seed0 = 2000);

// Closed-form naive rate at a fixed p (the objective of the NIID maximization),
// used as a lower-bound oracle for the estimator.
double niid_rate_at(double q, Arity arity, double p);

} // namespace behc::hmm
