#include "behc/simulator.hpp"

#include "behc/rng.hpp"
#include "behc/timing.hpp"

#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>

namespace behc::sim {

namespace {

enum class Scheme { Modulo, Extended };

SimTrace run_impl(Scheme scheme, double q, int N, const prob::Pmf& p_u,
                  const std::vector<std::int8_t>* signs, long long m,
                  std::uint64_t seed, long long storage_cap) {
    if (!(q > 0.0 && q <= 1.0)) throw std::invalid_argument("simulator: q must be in (0,1]");
    if (N < 1) throw std::invalid_argument("simulator: N must be >= 1");
    if (m < 1) throw std::invalid_argument("simulator: symbol count must be >= 1");
    if (p_u.support_min() < 0)
        throw std::invalid_argument("simulator: U support must be nonnegative");
    if (scheme == Scheme::Modulo && p_u.support_max() >= N)
        throw std::invalid_argument("simulator: modulo encoding needs U < N");
    const bool ternary = signs != nullptr;

    Rng rng(seed);
    SimTrace tr;
    tr.frame = N;
    tr.q = q;
    tr.symbol_times.reserve(m);
    tr.sent.reserve(m);
    tr.decoded.reserve(m);

    // draw the symbol stream up front
    const long long u_off = p_u.support_min();
    for (long long k = 0; k < m; ++k)
        tr.sent.push_back(static_cast<int>(u_off + rng.discrete(p_u.mass())));
    if (ternary) {
        tr.signs_sent.reserve(m);
        for (long long k = 0; k < m; ++k) {
            if (!signs->empty())
                tr.signs_sent.push_back((*signs)[static_cast<std::size_t>(k % signs->size())]);
            else
                tr.signs_sent.push_back(rng.bernoulli(0.5) ? 1 : -1);
        }
    }

    int s = 0;                 // battery at the start of the current use
    long long last_one = 0;    // time of the previous nonzero output (virtual at 0)
    long long battery_full_at = -1; // time the battery first held energy since last_one
    long long k = 0;           // current symbol
    double sum_t = 0.0, sum_t2 = 0.0;

    auto record = [&](long long i, int e, int s_now, int x) {
        if (static_cast<long long>(tr.arrivals.size()) < storage_cap) {
            tr.arrivals.push_back(static_cast<std::int8_t>(e));
            tr.battery.push_back(static_cast<std::int8_t>(s_now));
            tr.inputs.push_back(static_cast<std::int8_t>(x));
            tr.outputs.push_back(static_cast<std::int8_t>(x));
        } else {
            tr.storage_capped = true;
        }
    };

    for (long long i = 0;; ++i) {
        int x = 0;
        if (i > 0 && s == 1 && k < m) {
            if (battery_full_at < 0) battery_full_at = i;
            long long j = i - last_one - 1; // slot index since the last transmission
            long long u = tr.sent[static_cast<std::size_t>(k)];
            bool fire = false;
            if (scheme == Scheme::Modulo) {
                fire = (j % N) == (u % N);
            } else {
                fire = j >= u && ((j - u) % N) == 0;
            }
            if (fire) {
                x = ternary ? tr.signs_sent[static_cast<std::size_t>(k)] : 1;
                long long t = i - last_one;
                long long z = battery_full_at - last_one - 1;
                tr.symbol_times.push_back(t);
                tr.idle_times.push_back(z);
                tr.decoded.push_back(static_cast<int>((t - 1) % N));
                tr.frame_index.push_back((t - 1) / N);
                if (tr.decoded.back() != static_cast<int>(u % N)) ++tr.stats.decode_errors;
                if (ternary) {
                    tr.signs_decoded.push_back(static_cast<std::int8_t>(x > 0 ? 1 : -1));
                    if (tr.signs_decoded.back() != tr.signs_sent[static_cast<std::size_t>(k)])
                        ++tr.stats.sign_errors;
                }
                sum_t += static_cast<double>(t);
                sum_t2 += static_cast<double>(t) * static_cast<double>(t);
                ++tr.stats.ones;
                last_one = i;
                battery_full_at = -1;
                ++k;
            }
        }
        int consumed = (x != 0) ? 1 : 0;
        int e = rng.bernoulli(q) ? 1 : 0;
        tr.stats.arrivals_total += e;
        if (s == 1 && consumed == 0 && e == 1) ++tr.stats.wasted_arrivals;
        record(i, e, s, x);
        s = std::min(s - consumed + e, 1);
        if (k >= m) {
            tr.stats.steps = i + 1;
            break;
        }
    }
    tr.stats.symbols = m;
    tr.stats.mean_T = sum_t / static_cast<double>(m);
    tr.stats.var_T = sum_t2 / static_cast<double>(m) - tr.stats.mean_T * tr.stats.mean_T;
    return tr;
}

} // namespace

SimTrace run_modulo(double q, int N, const prob::Pmf& p_u, long long m,
                    std::uint64_t seed, long long storage_cap) {
    return run_impl(Scheme::Modulo, q, N, p_u, nullptr, m, seed, storage_cap);
}

SimTrace run_extended(double q, int N, const prob::Pmf& p_u, long long m,
                      std::uint64_t seed, long long storage_cap) {
    return run_impl(Scheme::Extended, q, N, p_u, nullptr, m, seed, storage_cap);
}

SimTrace run_ternary(double q, int N, const prob::Pmf& p_u,
                     const std::vector<std::int8_t>& signs, long long m,
                     std::uint64_t seed, long long storage_cap) {
    return run_impl(Scheme::Extended, q, N, p_u, &signs, m, seed, storage_cap);
}

double empirical_mutual_information(const SimTrace& trace) {
    const long long m = trace.stats.symbols;
    if (m == 0) return 0.0;
    std::map<std::pair<int, long long>, long long> joint;
    std::map<int, long long> cu;
    std::map<long long, long long> ct;
    for (long long k = 0; k < m; ++k) {
        int u = trace.sent[static_cast<std::size_t>(k)];
        long long t = trace.symbol_times[static_cast<std::size_t>(k)];
        ++joint[{u, t}];
        ++cu[u];
        ++ct[t];
    }
    double mi = 0.0, inv = 1.0 / static_cast<double>(m);
    for (const auto& [ut, n] : joint) {
        double pj = n * inv;
        double pu = cu[ut.first] * inv;
        double pt = ct[ut.second] * inv;
        mi += pj * std::log2(pj / (pu * pt));
    }
    return mi;
}

void dump_trace(const SimTrace& trace, std::ostream& os) {
    os << "index E S X Y\n";
    for (std::size_t i = 0; i < trace.arrivals.size(); ++i) {
        os << i << ' ' << static_cast<int>(trace.arrivals[i]) << ' '
           << static_cast<int>(trace.battery[i]) << ' ' << static_cast<int>(trace.inputs[i])
           << ' ' << static_cast<int>(trace.outputs[i]) << '\n';
    }
}

} // namespace behc::sim
