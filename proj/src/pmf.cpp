#include "behc/pmf.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace behc::prob {

Pmf::Pmf(long long offset, std::vector<double> mass)
    : offset_(offset), mass_(std::move(mass)) {
    if (mass_.empty())
        throw std::invalid_argument("Pmf: empty support");
    double sum = 0.0;
    for (double m : mass_) {
        if (!(m >= 0.0))
            throw std::invalid_argument("Pmf: negative or NaN mass entry");
        sum += m;
    }
    if (!(sum > 0.0) || !std::isfinite(sum))
        throw std::invalid_argument("Pmf: total mass must be positive and finite");
    if (std::fabs(sum - 1.0) > 1e-12) {
        for (double& m : mass_) m /= sum;
    }
}

double Pmf::mean() const {
    double s = 0.0;
    for (std::size_t i = 0; i < mass_.size(); ++i)
        s += static_cast<double>(offset_ + static_cast<long long>(i)) * mass_[i];
    return s;
}

double Pmf::variance() const {
    double mu = mean(), s = 0.0;
    for (std::size_t i = 0; i < mass_.size(); ++i) {
        double x = static_cast<double>(offset_ + static_cast<long long>(i)) - mu;
        s += x * x * mass_[i];
    }
    return s;
}

Pmf Pmf::point(long long x) { return Pmf(x, {1.0}); }

Pmf Pmf::uniform(long long lo, long long hi) {
    if (hi < lo) throw std::invalid_argument("Pmf::uniform: hi < lo");
    std::vector<double> m(static_cast<std::size_t>(hi - lo + 1),
                          1.0 / static_cast<double>(hi - lo + 1));
    return Pmf(lo, std::move(m));
}

double entropy(const std::vector<double>& mass) {
    double h = 0.0;
    for (double m : mass)
        if (m > 0.0) h -= m * std::log2(m);
    return h;
}

double entropy(const Pmf& p) { return entropy(p.mass()); }

double binary_entropy(double p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("binary_entropy: p outside [0,1], p=" + std::to_string(p));
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

Pmf geometric(double q, int max_support, double tail_tol) {
    if (!(q > 0.0 && q <= 1.0))
        throw std::invalid_argument("geometric: q must be in (0,1]");
    if (max_support < 0)
        throw std::invalid_argument("geometric: max_support < 0");
    if (q == 1.0) return Pmf::point(0);
    double beta = 1.0 - q;
    double tail = std::pow(beta, max_support + 1);
    if (tail > tail_tol)
        throw std::invalid_argument("geometric: truncated tail mass " + std::to_string(tail) +
                                    " exceeds tolerance; increase max_support");
    std::vector<double> m(static_cast<std::size_t>(max_support) + 1);
    double w = q;
    for (auto& x : m) { x = w; w *= beta; }
    Pmf p(0, std::move(m));
    p.truncation_residual_ = tail;
    return p;
}

Pmf truncated_geometric(double q, int t) {
    if (!(q > 0.0 && q < 1.0))
        throw std::invalid_argument("truncated_geometric: q must be in (0,1)");
    if (t < 1)
        throw std::invalid_argument("truncated_geometric: t must be >= 1");
    std::vector<double> m(static_cast<std::size_t>(t));
    double beta = 1.0 - q, w = q;
    for (auto& x : m) { x = w; w *= beta; }
    return Pmf(0, std::move(m));
}

double truncated_geom_gap(double q, int t) {
    if (!(q > 0.0 && q < 1.0))
        throw std::invalid_argument("truncated_geom_gap: q must be in (0,1)");
    if (t < 1)
        throw std::invalid_argument("truncated_geom_gap: t must be >= 1");
    double bt = std::pow(1.0 - q, t);
    if (bt <= 0.0) return 0.0; // underflow: truncation already negligible
    return binary_entropy(bt) / (1.0 - bt);
}

} // namespace behc::prob
