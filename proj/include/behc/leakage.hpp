#pragma once

#include "behc/pmf.hpp"

#include <string>
#include <vector>

namespace behc::leakage {

// Inner concave program shared by the bound computations:
//   max  -sum_t p(t) log2 p(t) - sum_t cost(t) p(t)
//   s.t. sum_t p(t) = 1,  p >= 0,  sum_{t<=s} p(t) <= prefix_cap[s-1] for
//        s = 1..len(prefix_cap).
// Solved exactly by a segment sweep: within each maximal run between tight
// prefixes the solution keeps the Gibbs shape A_j 2^(-cost); tight prefixes
// are located by the smallest mass-to-weight ratio, which makes the segment
// normalizers nondecreasing and hence the multipliers dual-feasible.
struct InnerSolution {
    std::vector<double> p;
    std::vector<double> gamma; // gamma[s-1] >= 0, one per prefix constraint
    double objective = 0.0;    // entropy - cost part, in bits
    int segments = 0;
};

InnerSolution max_entropy_prefix_capped(const std::vector<double>& cost_bits,
                                        const std::vector<double>& prefix_cap);

struct LeakageSolution {
    prob::Pmf p_t = prob::Pmf::point(1); // optimal output law on {1..t_max}
    double rate = 0.0;                   // bound value, bits per channel use
    double lambda = 0.0;                 // Dinkelbach multiplier at convergence
    double mu = 0.0;                     // coefficient of t in the exponent (= lambda)
    std::vector<double> gamma;           // prefix multipliers, bits
    double kkt_residual = 0.0;
    int iterations = 0;
    bool converged = false;
    bool closed_form_limit = false;      // q at/near 0 or 1, analytic value returned
    double q = 0.0;
    bool ternary = false;
    std::string note;
};

// State-leakage upper bound: max over the prefix-constrained output laws of
// [H(T) - sum_t Delta_t p(t)] / E[T], with Delta_t the truncated-geometric
// entropy gap. t_max = 0 picks max(ceil(log(1e-10)/log(1-q)), 256); the floor
// keeps the 2^(-lambda t) tail of the optimizer representable. Prefix caps
// below 1e-12 pin the leading probabilities to zero.
LeakageSolution leakage_ub(double q, int t_max = 0, double tol = 1e-11);

// Ternary variant: the numerator gains the sign-channel bit.
LeakageSolution leakage_ub_ternary(double q, int t_max = 0, double tol = 1e-11);

// Checks stationarity, primal/dual feasibility and complementary slackness of
// a solution against the inner problem at its final multiplier; returns the
// largest residual.
double verify_kkt(const LeakageSolution& sol, double q);

} // namespace behc::leakage
