#pragma once

#include <cstdint>
#include <vector>

namespace behc::prob {

// Finite probability mass function on a contiguous integer support
// {offset, offset+1, ..., offset+size-1}. Immutable after construction;
// construction validates non-negativity and renormalizes to unit mass.
class Pmf {
public:
    Pmf(long long offset, std::vector<double> mass);

    long long offset() const { return offset_; }
    long long support_min() const { return offset_; }
    long long support_max() const { return offset_ + static_cast<long long>(mass_.size()) - 1; }
    std::size_t size() const { return mass_.size(); }
    const std::vector<double>& mass() const { return mass_; }

    // Probability of x; zero outside the support.
    double operator()(long long x) const {
        long long i = x - offset_;
        if (i < 0 || i >= static_cast<long long>(mass_.size())) return 0.0;
        return mass_[static_cast<std::size_t>(i)];
    }

    double mean() const;
    double variance() const;

    // Mass dropped when a family with an infinite tail was truncated to this
    // support (diagnostic, set by the constructing routine; 0 for exact pmfs).
    double truncation_residual() const { return truncation_residual_; }

    static Pmf point(long long x);
    static Pmf uniform(long long lo, long long hi);

private:
    friend Pmf geometric(double q, int max_support, double tail_tol);
    long long offset_;
    std::vector<double> mass_;
    double truncation_residual_ = 0.0;
};

// Shannon entropy in bits, with 0*log 0 = 0.
double entropy(const Pmf& p);
double entropy(const std::vector<double>& mass);

// H2(p) = -p log2 p - (1-p) log2(1-p). Throws outside [0,1].
double binary_entropy(double p);

// Geometric(q) on {0..max_support}: mass(z) proportional to q(1-q)^z,
// renormalized. Requires the truncated tail (1-q)^(max_support+1) <= tail_tol.
// q = 1 gives a point mass at 0.
Pmf geometric(double q, int max_support, double tail_tol = 1e-12);

// Truncated geometric on {0..t-1}: p(z) = q(1-q)^z / (1-(1-q)^t).
Pmf truncated_geometric(double q, int t);

// Leakage penalty Delta_t = H2((1-q)^t) / (1-(1-q)^t), which equals
// H(Z) - H(Z_t) for Z geometric(q) and Z_t its truncation to {0..t-1}.
double truncated_geom_gap(double q, int t);

} // namespace behc::prob
