#pragma once

#include "behc/pmf.hpp"

#include <vector>

namespace behc::timing {

enum class MapKind { Modulo, Extended };

// Deterministic strategy map v(u,z) with frame length N.
// Modulo restricts u to {0..N-1}; Extended allows any u >= 0.
struct StrategyMap {
    MapKind kind = MapKind::Modulo;
    int frame = 1; // N >= 1
};

// v(u,z): Modulo gives ((u-z) mod N) + 1 in {1..N}; Extended gives u-z+1 when
// u >= z and falls back to the modulo branch otherwise.
int apply_map(const StrategyMap& m, long long u, long long z);

// (t-1) mod N; inverts the modulo map for any z.
int decode_modulo(long long t, int frame);

// Conditional law p(t|u) of the timing channel T = v(U,Z) + Z on truncated
// supports, with per-symbol expected durations c(u) = E[T|U=u] in binary
// channel uses.
class TimingChannel {
public:
    int u_max() const { return u_max_; }
    int t_max() const { return t_max_; }
    double q() const { return q_; }
    const StrategyMap& map() const { return map_; }

    // p(t|u) for t in {1..t_max}
    double cond(int u, int t) const { return cond_[static_cast<std::size_t>(u) * t_max_ + (t - 1)]; }
    double cost(int u) const { return cost_[static_cast<std::size_t>(u)]; }
    const std::vector<double>& cost_vector() const { return cost_; }

    struct Diagnostics {
        double max_row_residual = 0.0; // pre-renormalization mass missing from a row
        double folded_mass = 0.0;      // mass folded into the last column
        double cost_error_bound = 0.0; // bound on |c(u) error| induced by folding
    };
    const Diagnostics& diagnostics() const { return diag_; }

private:
    friend TimingChannel build_channel(const StrategyMap&, double, int, int);
    StrategyMap map_;
    double q_ = 0.0;
    int u_max_ = 0, t_max_ = 0;
    std::vector<double> cond_; // (u_max+1) x t_max, row-major
    std::vector<double> cost_;
    Diagnostics diag_;
};

// Builds the conditional law by enumerating idle times z with geometric
// weights until the residual tail is below 1e-12. t_max = 0 selects the
// default u_max + ceil(log(1e-12)/log(1-q)) + N; mass that would land beyond
// t_max is folded into the last column and the induced cost error reported.
// Rejects a t_max so tight that more than 1e-3 of some row would fold.
TimingChannel build_channel(const StrategyMap& m, double q, int u_max, int t_max = 0);

// I(U;T) = H(T) - H(T|U) in bits for an input distribution on {0..u_max}.
double mutual_information(const prob::Pmf& p_u, const TimingChannel& ch);

// Output marginal p(t) on {1..t_max}.
prob::Pmf output_marginal(const prob::Pmf& p_u, const TimingChannel& ch);

// E[T] = sum_u p(u) c(u).
double expected_duration(const prob::Pmf& p_u, const TimingChannel& ch);

} // namespace behc::timing
