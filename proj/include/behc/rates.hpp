#pragma once

#include "behc/pmf.hpp"
#include "behc/timing.hpp"

#include <string>
#include <vector>

namespace behc::rates {

struct NRange {
    int lo = 1;
    int hi = 256;
};

struct RateResult {
    double rate = 0.0;      // bits per binary channel use
    prob::Pmf p_u = prob::Pmf::point(0);
    int frame = 1;          // N
    double lambda = 0.0;    // final Dinkelbach multiplier (= rate at convergence)
    int iterations = 0;
    bool converged = false;
    struct Diagnostics {
        double truncation_residual = 0.0;
        double cost_error_bound = 0.0;
        int u_max_used = 0;
        bool u_max_capped = false;
        std::string note;
    } diag;
};

// Exact per-symbol costs c(u) = 1 + E[(u-Z) mod N] + E[Z] for the modulo map,
// u in {0..N-1}, via the residue distribution of Z mod N (no truncation).
std::vector<double> modulo_costs(double q, int N);

// Modulo-encoding rate for a fixed frame: max over p_u on {0..N-1} of
// H(U)/E[V+Z]. Dinkelbach iteration on lambda; each inner problem
// max H(U) - lambda*E[c] has the closed-form Gibbs solution
// p(u) proportional to 2^(-lambda c(u)). Rejects q = 0 (infinite idle time).
RateResult modulo_rate(double q, int N, double tol = 1e-12);

// Best modulo rate over the frame range, early-stopping after 16 consecutive
// non-improving N; ties break toward smaller N. q = 1 returns the limit rate 1
// (the supremum over N, not attained at any finite frame).
RateResult modulo_rate_best(double q, NRange range = {});

// Extended-encoding rate: max over p_u on {0..u_max} of I(U;T)/E[T] for the
// Extended(N) channel. Dinkelbach outer loop; inner problems solved by
// Blahut-Arimoto updates with a cost tilt. u_max0 = 0 starts from max(2N,16);
// the support is grown until the rate gain drops below 1e-5.
RateResult extended_rate(double q, int N, int u_max0 = 0, double tol = 1e-10);

RateResult extended_rate_best(double q, NRange range = {});

enum class Scheme { Modulo, Extended };

// Ternary variants: the noiseless sign channel contributes one extra bit per
// timing symbol, so the numerators become H(U)+1 and I(U;T)+1.
RateResult ternary_timing_rate(double q, Scheme scheme, NRange range = {});

struct AsymptoticReport {
    double q = 0.0;
    double genie = 0.0;
    double modulo = 0.0;
    double ratio = 0.0;          // genie / modulo
    int modulo_frame = 0;
    int witness_frame = 0;       // N = ceil(1/p*)
    double witness_rate = 0.0;   // uniform U on the witness frame
    double witness_lower = 0.0;  // -q p* log2(p*) / (q + p*(1-q))
};

// Genie bound over best modulo rate, plus the small-q witness construction
// (uniform U, N = ceil(1/p*)). The frame range is widened beyond the default
// when 1/p* approaches it, since the optimal frame grows without bound as
// q -> 0.
AsymptoticReport asymptotic_ratio(double q);

} // namespace behc::rates
