#include "behc/rates.hpp"

#include "behc/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace behc::rates {

namespace {

constexpr double kLog2_3 = 1.5849625007211562;

// Sparse view of a timing-channel row: (t, p(t|u)) pairs.
struct SparseChannel {
    int u_max = 0, t_max = 0;
    std::vector<std::vector<std::pair<int, double>>> rows;
    std::vector<double> cost;
    timing::TimingChannel::Diagnostics diag;
};

SparseChannel sparsify(const timing::TimingChannel& ch) {
    SparseChannel s;
    s.u_max = ch.u_max();
    s.t_max = ch.t_max();
    s.rows.resize(ch.u_max() + 1);
    s.cost = ch.cost_vector();
    s.diag = ch.diagnostics();
    for (int u = 0; u <= ch.u_max(); ++u)
        for (int t = 1; t <= ch.t_max(); ++t)
            if (double p = ch.cond(u, t); p > 0.0)
                s.rows[u].emplace_back(t, p);
    return s;
}

struct InnerSolution {
    std::vector<double> p;
    double info = 0.0;     // I(U;T) bits
    double cost = 0.0;     // E[T]
    double gap = 0.0;      // Blahut-Arimoto optimality gap at exit
    int iterations = 0;
};

// max over p of I(U;T) - lambda E[T]: exponentiated posterior update with a
// cost tilt. Converged when the upper/lower capacity bounds pinch.
InnerSolution ba_inner(const SparseChannel& ch, double lambda, std::vector<double> p,
                       double tol, int it_max) {
    const int U = ch.u_max + 1;
    std::vector<double> marg(ch.t_max), expo(U), d(U);
    InnerSolution out;
    for (int it = 0; it < it_max; ++it) {
        std::fill(marg.begin(), marg.end(), 0.0);
        for (int u = 0; u < U; ++u) {
            if (p[u] <= 0.0) continue;
            for (auto [t, w] : ch.rows[u]) marg[t - 1] += p[u] * w;
        }
        for (int u = 0; u < U; ++u) {
            double du = 0.0;
            for (auto [t, w] : ch.rows[u]) {
                double m = marg[t - 1];
                if (m > 0.0) du += w * std::log2(w / m);
            }
            d[u] = du;
            expo[u] = du - lambda * ch.cost[u];
        }
        double emax = *std::max_element(expo.begin(), expo.end());
        double z = 0.0;
        for (int u = 0; u < U; ++u) z += p[u] * std::exp2(expo[u] - emax);
        double f_low = std::log2(z) + emax;
        out.gap = emax - f_low;
        out.iterations = it + 1;
        for (int u = 0; u < U; ++u) p[u] *= std::exp2(expo[u] - emax) / z;
        if (out.gap < tol) break;
    }
    // evaluate I and E[T] at the final iterate
    std::fill(marg.begin(), marg.end(), 0.0);
    for (int u = 0; u < U; ++u)
        if (p[u] > 0.0)
            for (auto [t, w] : ch.rows[u]) marg[t - 1] += p[u] * w;
    double info = 0.0, cost = 0.0;
    for (int u = 0; u < U; ++u) {
        if (p[u] <= 0.0) continue;
        double du = 0.0;
        for (auto [t, w] : ch.rows[u]) {
            double m = marg[t - 1];
            if (m > 0.0) du += w * std::log2(w / m);
        }
        info += p[u] * du;
        cost += p[u] * ch.cost[u];
    }
    out.p = std::move(p);
    out.info = info;
    out.cost = cost;
    return out;
}

RateResult extended_rate_impl(double q, int N, int u_max0, double tol, double bonus) {
    if (!(q > 0.0 && q < 1.0))
        throw std::invalid_argument("extended_rate: q must be in (0,1)");
    if (N < 1) throw std::invalid_argument("extended_rate: N must be >= 1");
    constexpr int kUMaxCap = 4096;
    int u_max = u_max0 > 0 ? u_max0 : std::max(2 * N, 16);

    RateResult best;
    std::vector<double> warm;
    double prev_rate = -1.0;
    while (true) {
        auto ch = sparsify(timing::build_channel({timing::MapKind::Extended, N}, q, u_max));
        std::vector<double> p(u_max + 1, 1.0 / (u_max + 1));
        if (!warm.empty()) {
            // continuation: keep the previous optimum, spread a little mass on
            // the newly added symbols
            double fresh = 0.02 / (u_max + 1);
            for (int u = 0; u <= u_max; ++u)
                p[u] = (u < static_cast<int>(warm.size()) ? 0.98 * warm[u] : 0.0) + fresh;
            double s = 0.0;
            for (double x : p) s += x;
            for (double& x : p) x /= s;
        }
        double lambda = 0.0;
        InnerSolution inner;
        int outer = 0;
        bool converged = false;
        for (; outer < 200; ++outer) {
            inner = ba_inner(ch, lambda, p, 1e-9, 50000);
            p = inner.p;
            double next = (inner.info + bonus) / inner.cost;
            if (std::fabs(next - lambda) < tol) {
                lambda = next;
                converged = true;
                break;
            }
            lambda = next;
        }
        RateResult r;
        r.rate = lambda;
        r.lambda = lambda;
        r.frame = N;
        r.iterations = outer + 1;
        r.converged = converged;
        r.p_u = prob::Pmf(0, inner.p);
        r.diag.truncation_residual = ch.diag.max_row_residual;
        r.diag.cost_error_bound = ch.diag.cost_error_bound;
        r.diag.u_max_used = u_max;
        warm = inner.p;

        if (prev_rate >= 0.0 && r.rate - prev_rate < 1e-5) {
            best = std::move(r);
            break;
        }
        prev_rate = r.rate;
        if (u_max >= kUMaxCap) {
            r.diag.u_max_capped = true;
            r.diag.note = "u_max cap reached before the rate stabilized";
            best = std::move(r);
            break;
        }
        u_max *= 2;
    }
    return best;
}

RateResult best_over_frames(const NRange& range, double floor_rate,
                            const std::function<RateResult(int)>& solve) {
    RateResult best;
    best.rate = floor_rate - 1.0;
    int no_improve = 0;
    for (int N = std::max(1, range.lo); N <= range.hi; ++N) {
        RateResult r = solve(N);
        if (r.rate > best.rate + 1e-12) {
            best = std::move(r);
            no_improve = 0;
        } else if (++no_improve >= 16) {
            break;
        }
    }
    return best;
}

} // namespace

std::vector<double> modulo_costs(double q, int N) {
    if (!(q > 0.0 && q <= 1.0)) throw std::invalid_argument("modulo_costs: q must be in (0,1]");
    if (N < 1) throw std::invalid_argument("modulo_costs: N must be >= 1");
    double beta = 1.0 - q;
    std::vector<double> residue(N, 0.0); // P[Z mod N = m]
    if (beta == 0.0) {
        residue[0] = 1.0;
    } else {
        double bN = std::pow(beta, N), w = q / (1.0 - bN);
        for (int m = 0; m < N; ++m) { residue[m] = w; w *= beta; }
    }
    double ez = beta / q;
    std::vector<double> c(N);
    for (int u = 0; u < N; ++u) {
        double ev = 0.0;
        for (int m = 0; m < N; ++m) {
            int r = (u - m) % N;
            if (r < 0) r += N;
            ev += static_cast<double>(r) * residue[m];
        }
        c[u] = 1.0 + ev + ez;
    }
    return c;
}

RateResult modulo_rate(double q, int N, double tol) {
    if (q == 0.0) throw std::invalid_argument("modulo_rate: q = 0 has infinite idle time");
    if (!(q > 0.0 && q <= 1.0)) throw std::invalid_argument("modulo_rate: q must be in (0,1]");
    if (N < 1) throw std::invalid_argument("modulo_rate: N must be >= 1");
    RateResult r;
    r.frame = N;
    if (N == 1) {
        r.rate = 0.0;
        r.converged = true;
        r.p_u = prob::Pmf::point(0);
        return r;
    }
    std::vector<double> c = modulo_costs(q, N);
    std::vector<double> p(N, 1.0 / N);
    double lambda = 0.0;
    for (int it = 0; it < 200; ++it) {
        double cmin = *std::min_element(c.begin(), c.end());
        double z = 0.0;
        for (int u = 0; u < N; ++u) {
            p[u] = std::exp2(-lambda * (c[u] - cmin));
            z += p[u];
        }
        double h = 0.0, et = 0.0;
        for (int u = 0; u < N; ++u) {
            p[u] /= z;
            if (p[u] > 0.0) h -= p[u] * std::log2(p[u]);
            et += p[u] * c[u];
        }
        double next = h / et;
        r.iterations = it + 1;
        if (std::fabs(next - lambda) < tol) {
            r.converged = true;
            lambda = next;
            break;
        }
        lambda = next;
    }
    r.rate = lambda;
    r.lambda = lambda;
    r.p_u = prob::Pmf(0, p);
    return r;
}

RateResult modulo_rate_best(double q, NRange range) {
    if (q == 0.0) throw std::invalid_argument("modulo_rate_best: q = 0 has infinite idle time");
    if (q == 1.0) {
        // sup over N: each finite frame stays below 1 bit/use, approaching it
        // as N grows; report the limit with the dyadic optimizer.
        RateResult r;
        r.rate = 1.0;
        r.lambda = 1.0;
        r.frame = range.hi;
        r.converged = true;
        r.diag.note = "q=1 limit: rate 1 is the supremum over N";
        std::vector<double> p(range.hi);
        double w = 0.5;
        for (auto& x : p) { x = w; w *= 0.5; }
        r.p_u = prob::Pmf(0, std::move(p));
        return r;
    }
    return best_over_frames(range, 0.0, [&](int N) { return modulo_rate(q, N); });
}

RateResult extended_rate(double q, int N, int u_max0, double tol) {
    if (q == 1.0) {
        RateResult r;
        r.rate = 1.0;
        r.lambda = 1.0;
        r.frame = N;
        r.converged = true;
        r.diag.note = "q=1 limit: dyadic waiting times achieve 1 bit/use";
        return r;
    }
    return extended_rate_impl(q, N, u_max0, tol, 0.0);
}

RateResult extended_rate_best(double q, NRange range) {
    if (q == 1.0) return extended_rate(q, range.hi, 0);
    return best_over_frames(range, 0.0, [&](int N) { return extended_rate(q, N); });
}

RateResult ternary_timing_rate(double q, Scheme scheme, NRange range) {
    if (q == 0.0) {
        RateResult r;
        r.rate = 0.0;
        r.converged = true;
        r.diag.note = "q=0: no energy, no transmissions";
        return r;
    }
    if (q == 1.0) {
        RateResult r;
        r.rate = kLog2_3;
        r.lambda = kLog2_3;
        r.frame = range.hi;
        r.converged = true;
        r.diag.note = "q=1 limit: ternary DMC capacity log2(3)";
        return r;
    }
    if (scheme == Scheme::Extended)
        return best_over_frames(range, 0.0,
                                [&](int N) { return extended_rate_impl(q, N, 0, 1e-10, 1.0); });
    // modulo with the sign bit: same Gibbs inner problem, shifted ratio update
    return best_over_frames(range, 0.0, [&](int N) {
        std::vector<double> c = modulo_costs(q, N);
        std::vector<double> p(N, 1.0 / N);
        RateResult r;
        r.frame = N;
        double lambda = 0.0;
        for (int it = 0; it < 300; ++it) {
            double cmin = *std::min_element(c.begin(), c.end());
            double z = 0.0;
            for (int u = 0; u < N; ++u) {
                p[u] = std::exp2(-lambda * (c[u] - cmin));
                z += p[u];
            }
            double h = 0.0, et = 0.0;
            for (int u = 0; u < N; ++u) {
                p[u] /= z;
                if (p[u] > 0.0) h -= p[u] * std::log2(p[u]);
                et += p[u] * c[u];
            }
            double next = (h + 1.0) / et;
            r.iterations = it + 1;
            if (std::fabs(next - lambda) < 1e-12) {
                r.converged = true;
                lambda = next;
                break;
            }
            lambda = next;
        }
        r.rate = lambda;
        r.lambda = lambda;
        r.p_u = prob::Pmf(0, p);
        return r;
    });
}

AsymptoticReport asymptotic_ratio(double q) {
    if (!(q > 0.0 && q < 1.0))
        throw std::invalid_argument("asymptotic_ratio: q must be in (0,1)");
    AsymptoticReport rep;
    rep.q = q;
    auto genie = closed_form::genie_ub_binary(q);
    rep.genie = genie.value;
    double p_star = genie.p_star;
    int witness_N = static_cast<int>(std::ceil(1.0 / p_star));
    NRange range;
    range.hi = std::max(256, 4 * witness_N);
    auto mod = modulo_rate_best(q, range);
    rep.modulo = mod.rate;
    rep.modulo_frame = mod.frame;
    rep.ratio = genie.value / mod.rate;
    rep.witness_frame = witness_N;
    std::vector<double> c = modulo_costs(q, witness_N);
    double mean_c = 0.0;
    for (double x : c) mean_c += x;
    mean_c /= witness_N;
    rep.witness_rate = std::log2(static_cast<double>(witness_N)) / mean_c;
    rep.witness_lower = -q * p_star * std::log2(p_star) / (q + p_star * (1.0 - q));
    return rep;
}

} // namespace behc::rates
