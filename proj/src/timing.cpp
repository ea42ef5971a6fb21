#include "behc/timing.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace behc::timing {

namespace {

long long pos_mod(long long a, long long n) {
    long long r = a % n;
    return r < 0 ? r + n : r;
}

} // namespace

int apply_map(const StrategyMap& m, long long u, long long z) {
    if (m.frame < 1) throw std::invalid_argument("apply_map: frame must be >= 1");
    if (u < 0 || z < 0) throw std::invalid_argument("apply_map: u and z must be >= 0");
    switch (m.kind) {
        case MapKind::Modulo:
            if (u >= m.frame)
                throw std::invalid_argument("apply_map: Modulo requires u < N");
            return static_cast<int>(pos_mod(u - z, m.frame)) + 1;
        case MapKind::Extended:
            if (u >= z) return static_cast<int>(u - z) + 1;
            return static_cast<int>(pos_mod(u - z, m.frame)) + 1;
    }
    throw std::logic_error("apply_map: bad kind");
}

int decode_modulo(long long t, int frame) {
    if (frame < 1) throw std::invalid_argument("decode_modulo: frame must be >= 1");
    return static_cast<int>(pos_mod(t - 1, frame));
}

TimingChannel build_channel(const StrategyMap& m, double q, int u_max, int t_max) {
    if (!(q > 0.0 && q <= 1.0))
        throw std::invalid_argument("build_channel: q must be in (0,1]");
    if (u_max < 0) throw std::invalid_argument("build_channel: u_max < 0");
    if (m.kind == MapKind::Modulo && u_max >= m.frame)
        throw std::invalid_argument("build_channel: Modulo map requires u_max < N");

    double beta = 1.0 - q;
    int z_cap = 0;
    if (beta > 0.0)
        z_cap = static_cast<int>(std::ceil(std::log(1e-12) / std::log(beta)));
    if (t_max <= 0) t_max = u_max + z_cap + m.frame;
    if (t_max < 1) t_max = 1;

    TimingChannel ch;
    ch.map_ = m;
    ch.q_ = q;
    ch.u_max_ = u_max;
    ch.t_max_ = t_max;
    ch.cond_.assign(static_cast<std::size_t>(u_max + 1) * t_max, 0.0);
    ch.cost_.assign(static_cast<std::size_t>(u_max + 1), 0.0);

    for (int u = 0; u <= u_max; ++u) {
        double* row = ch.cond_.data() + static_cast<std::size_t>(u) * t_max;
        double w = q; // P[Z=z]
        double folded = 0.0, folded_excess = 0.0;
        for (long long z = 0; z <= z_cap; ++z) {
            long long t = apply_map(m, u, z) + z;
            if (t > t_max) {
                row[t_max - 1] += w;
                folded += w;
                folded_excess += w * static_cast<double>(t - t_max);
            } else {
                row[t - 1] += w;
            }
            w *= beta;
            if (w == 0.0) break;
        }
        double sum = 0.0;
        for (int t = 0; t < t_max; ++t) sum += row[t];
        double residual = 1.0 - sum;
        if (residual > 1e-9)
            throw std::runtime_error("build_channel: truncated tail " + std::to_string(residual) +
                                     " exceeds tolerance at u=" + std::to_string(u) +
                                     "; increase t_max");
        if (folded > 1e-3)
            throw std::runtime_error("build_channel: t_max truncates " + std::to_string(folded) +
                                     " of row u=" + std::to_string(u) + "; increase t_max");
        ch.diag_.max_row_residual = std::max(ch.diag_.max_row_residual, residual);
        ch.diag_.folded_mass = std::max(ch.diag_.folded_mass, folded);
        ch.diag_.cost_error_bound = std::max(ch.diag_.cost_error_bound, folded_excess);
        double c = 0.0;
        for (int t = 0; t < t_max; ++t) {
            row[t] /= sum;
            c += row[t] * static_cast<double>(t + 1);
        }
        ch.cost_[static_cast<std::size_t>(u)] = c;
    }
    return ch;
}

double mutual_information(const prob::Pmf& p_u, const TimingChannel& ch) {
    if (p_u.support_min() < 0 || p_u.support_max() > ch.u_max())
        throw std::invalid_argument("mutual_information: p_u not supported on {0..u_max}");
    int T = ch.t_max();
    std::vector<double> marg(static_cast<std::size_t>(T), 0.0);
    for (long long u = p_u.support_min(); u <= p_u.support_max(); ++u) {
        double pu = p_u(u);
        if (pu <= 0.0) continue;
        for (int t = 1; t <= T; ++t)
            marg[t - 1] += pu * ch.cond(static_cast<int>(u), t);
    }
    double h_t = prob::entropy(marg);
    double h_t_given_u = 0.0;
    for (long long u = p_u.support_min(); u <= p_u.support_max(); ++u) {
        double pu = p_u(u);
        if (pu <= 0.0) continue;
        double h = 0.0;
        for (int t = 1; t <= T; ++t) {
            double p = ch.cond(static_cast<int>(u), t);
            if (p > 0.0) h -= p * std::log2(p);
        }
        h_t_given_u += pu * h;
    }
    return h_t - h_t_given_u;
}

prob::Pmf output_marginal(const prob::Pmf& p_u, const TimingChannel& ch) {
    int T = ch.t_max();
    std::vector<double> marg(static_cast<std::size_t>(T), 0.0);
    for (long long u = p_u.support_min(); u <= p_u.support_max(); ++u) {
        double pu = p_u(u);
        if (pu <= 0.0) continue;
        for (int t = 1; t <= T; ++t)
            marg[t - 1] += pu * ch.cond(static_cast<int>(u), t);
    }
    return prob::Pmf(1, std::move(marg));
}

double expected_duration(const prob::Pmf& p_u, const TimingChannel& ch) {
    double s = 0.0;
    for (long long u = p_u.support_min(); u <= p_u.support_max(); ++u)
        s += p_u(u) * ch.cost(static_cast<int>(u));
    return s;
}

} // namespace behc::timing
