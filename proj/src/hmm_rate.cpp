#include "behc/hmm_rate.hpp"

#include "behc/pmf.hpp"
#include "behc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace behc::hmm {

namespace {
constexpr double kLog2_3 = 1.5849625007211562;
}

int StrategyCodebook::histories() const {
    int a = alphabet(), h = 1;
    for (int i = 0; i < order; ++i) h *= a;
    return h;
}

std::vector<double> StrategyCodebook::stationary_history() const {
    int H = histories(), A = alphabet();
    std::vector<double> pi(H, 1.0 / H), nxt(H);
    int hist_div = H / A; // h' = u + A*(h mod (H/A)) for order >= 1
    for (int it = 0; it < 500; ++it) {
        std::fill(nxt.begin(), nxt.end(), 0.0);
        for (int h = 0; h < H; ++h) {
            if (pi[h] <= 0.0) continue;
            for (int u = 0; u < A; ++u) {
                double p = transition[static_cast<std::size_t>(h) * A + u];
                if (p <= 0.0) continue;
                int h2 = (order == 0) ? 0 : u + A * (h % hist_div);
                nxt[h2] += pi[h] * p;
            }
        }
        double diff = 0.0;
        for (int h = 0; h < H; ++h) diff += std::fabs(nxt[h] - pi[h]);
        pi.swap(nxt);
        if (diff < 1e-14) break;
    }
    return pi;
}

StrategyCodebook StrategyCodebook::iid(Arity arity, double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("iid codebook: p outside [0,1]");
    StrategyCodebook cb;
    cb.arity = arity;
    cb.order = 0;
    if (arity == Arity::Binary) {
        cb.transition = {1.0 - p, p};
    } else {
        if (p > 0.5) throw std::invalid_argument("iid ternary codebook: p must be <= 1/2");
        cb.transition = {1.0 - 2.0 * p, p, p};
    }
    return cb;
}

StrategyCodebook StrategyCodebook::markov1_binary(double a, double b) {
    StrategyCodebook cb;
    cb.arity = Arity::Binary;
    cb.order = 1;
    cb.transition = {1.0 - a, a,   // after idle
                     1.0 - b, b};  // after send
    return cb;
}

StrategyCodebook StrategyCodebook::markov2_binary(const std::array<double, 4>& p1) {
    StrategyCodebook cb;
    cb.arity = Arity::Binary;
    cb.order = 2;
    cb.transition.resize(8);
    for (int h = 0; h < 4; ++h) {
        cb.transition[2 * h] = 1.0 - p1[h];
        cb.transition[2 * h + 1] = p1[h];
    }
    return cb;
}

StrategyCodebook StrategyCodebook::markov1_ternary(double p_after_idle, double p_after_send) {
    StrategyCodebook cb;
    cb.arity = Arity::Ternary;
    cb.order = 1;
    cb.transition.resize(9);
    auto fill_row = [&](int h, double p) {
        cb.transition[3 * h] = 1.0 - 2.0 * p;
        cb.transition[3 * h + 1] = p;
        cb.transition[3 * h + 2] = p;
    };
    fill_row(0, p_after_idle);
    fill_row(1, p_after_send);
    fill_row(2, p_after_send); // symmetric in the two energized symbols
    return cb;
}

StrategyCodebook StrategyCodebook::markov2_ternary(const std::array<double, 4>& p_send) {
    StrategyCodebook cb;
    cb.arity = Arity::Ternary;
    cb.order = 2;
    cb.transition.resize(27);
    for (int h = 0; h < 9; ++h) {
        int recent = h % 3, older = h / 3;
        int cls = (recent != 0 ? 1 : 0) + 2 * (older != 0 ? 1 : 0);
        double p = p_send[cls];
        cb.transition[3 * h] = 1.0 - 2.0 * p;
        cb.transition[3 * h + 1] = p;
        cb.transition[3 * h + 2] = p;
    }
    return cb;
}

ChannelKernel build_kernel(double q, Arity arity) {
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("build_kernel: q outside [0,1]");
    return ChannelKernel{q, arity};
}

InfoRateEstimate info_rate(const StrategyCodebook& cb, const ChannelKernel& k,
                           long long n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("info_rate: n must be >= 1");
    if ((cb.arity == Arity::Binary) != (k.arity == Arity::Binary))
        throw std::invalid_argument("info_rate: codebook and kernel arity mismatch");
    const int A = cb.alphabet();
    const int H = cb.histories();
    const int hist_div = H / A;
    const double q = k.q;
    Rng rng(seed);

    std::vector<double> pi = cb.stationary_history();
    // realization state
    int s = 1;
    int h = rng.discrete(pi);

    // conditional forward message over the battery state
    double ac[2] = {0.0, 1.0};
    // unconditional forward message over (battery, history)
    std::vector<double> au(2 * H, 0.0), au_next(2 * H);
    for (int hh = 0; hh < H; ++hh) au[H + hh] = pi[hh];

    const int n_batches = 32;
    const long long batch_len = std::max<long long>(1, n / n_batches);
    std::vector<double> batch_sum;
    batch_sum.reserve(n_batches + 1);
    double cur_batch = 0.0;
    long long in_batch = 0;
    double total = 0.0;

    const double* trans = cb.transition.data();
    for (long long i = 0; i < n; ++i) {
        // sample strategy, drive the channel
        double u_draw = rng.uniform(), acc = 0.0;
        int u = A - 1;
        for (int cand = 0; cand < A; ++cand) {
            acc += trans[static_cast<std::size_t>(h) * A + cand];
            if (u_draw < acc) { u = cand; break; }
        }
        int y = k.output(u, s);
        bool consume = k.consumes(u, s);
        int e = rng.bernoulli(q) ? 1 : 0;
        s = std::min(s - (consume ? 1 : 0) + e, 1);
        h = (cb.order == 0) ? 0 : u + A * (h % hist_div);

        // conditional step: battery hidden, strategy known
        double n0 = 0.0, n1 = 0.0;
        for (int sh = 0; sh < 2; ++sh) {
            double w = ac[sh];
            if (w <= 0.0) continue;
            if (k.output(u, sh) != y) continue;
            double pf = k.p_next_full(u, sh);
            n0 += w * (1.0 - pf);
            n1 += w * pf;
        }
        double norm_c = n0 + n1;
        ac[0] = n0 / norm_c;
        ac[1] = n1 / norm_c;

        // unconditional step: battery and history hidden
        std::fill(au_next.begin(), au_next.end(), 0.0);
        for (int sh = 0; sh < 2; ++sh) {
            for (int hh = 0; hh < H; ++hh) {
                double w = au[sh * H + hh];
                if (w <= 0.0) continue;
                for (int uu = 0; uu < A; ++uu) {
                    double pu = trans[static_cast<std::size_t>(hh) * A + uu];
                    if (pu <= 0.0) continue;
                    if (k.output(uu, sh) != y) continue;
                    int h2 = (cb.order == 0) ? 0 : uu + A * (hh % hist_div);
                    double pf = k.p_next_full(uu, sh);
                    double m = w * pu;
                    au_next[h2] += m * (1.0 - pf);
                    au_next[H + h2] += m * pf;
                }
            }
        }
        double norm_u = 0.0;
        for (double v : au_next) norm_u += v;
        for (int j = 0; j < 2 * H; ++j) au[j] = au_next[j] / norm_u;

        double d = std::log2(norm_c / norm_u);
        total += d;
        cur_batch += d;
        if (++in_batch == batch_len) {
            batch_sum.push_back(cur_batch / batch_len);
            cur_batch = 0.0;
            in_batch = 0;
        }
    }
    // the sub-batch remainder is dropped: a runt batch would dominate the
    // sample variance of the batch means

    InfoRateEstimate est;
    est.n = n;
    est.rate = total / n;
    if (batch_sum.size() >= 2) {
        double mean = 0.0;
        for (double b : batch_sum) mean += b;
        mean /= batch_sum.size();
        double var = 0.0;
        for (double b : batch_sum) var += (b - mean) * (b - mean);
        var /= (batch_sum.size() - 1);
        est.stderr_ = std::sqrt(var / batch_sum.size());
    }
    return est;
}

double niid_rate_at(double q, Arity arity, double p) {
    using prob::binary_entropy;
    if (q <= 0.0) return 0.0;
    if (arity == Arity::Binary) {
        double rho = q / (p + q - p * q);
        return binary_entropy(p * rho) - p * binary_entropy(rho);
    }
    double rho = q / (2.0 * p + q - 2.0 * p * q);
    double side = p * rho, mid = 1.0 - 2.0 * side, h = 0.0;
    if (side > 0.0) h -= 2.0 * side * std::log2(side);
    if (mid > 0.0) h -= mid * std::log2(mid);
    return h - 2.0 * p * binary_entropy(rho);
}

namespace {

struct SearchPoint {
    std::vector<double> params;
    double value = -1.0;
};

double eval_params(double q, Arity arity, int order, const std::vector<double>& params,
                   long long n, std::uint64_t seed) {
    StrategyCodebook cb;
    if (order == 0) {
        cb = StrategyCodebook::iid(arity, params[0]);
    } else if (order == 1) {
        cb = (arity == Arity::Binary) ? StrategyCodebook::markov1_binary(params[0], params[1])
                                      : StrategyCodebook::markov1_ternary(params[0], params[1]);
    } else {
        std::array<double, 4> a{params[0], params[1], params[2], params[3]};
        cb = (arity == Arity::Binary) ? StrategyCodebook::markov2_binary(a)
                                      : StrategyCodebook::markov2_ternary(a);
    }
    return info_rate(cb, build_kernel(q, arity), n, seed).rate;
}

SimRateResult finalize(double q, Arity arity, int order, std::vector<double> params,
                       long long n, int n_seeds, std::uint64_t seed0) {
    std::vector<double> vals(n_seeds);
    for (int s = 0; s < n_seeds; ++s)
        vals[s] = eval_params(q, arity, order, params, n, seed0 + 7919 * (s + 1));
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= n_seeds;
    double var = 0.0;
    for (double v : vals) var += (v - mean) * (v - mean);
    var = n_seeds > 1 ? var / (n_seeds - 1) : 0.0;
    SimRateResult r;
    r.rate = mean;
    r.stderr_ = std::sqrt(var / std::max(1, n_seeds));
    r.params = std::move(params);
    r.order = order;
    r.n = n;
    r.seeds = n_seeds;
    return r;
}

double p_hi(Arity arity) { return arity == Arity::Binary ? 0.98 : 0.49; }

// single-seed grid search for the best i.i.d. parameter
double search_iid_p(double q, Arity arity, long long n_search, std::uint64_t seed) {
    double hi = p_hi(arity);
    double best_p = 0.02, best_v = -1.0;
    double step = arity == Arity::Binary ? 0.02 : 0.01;
    for (double p = step; p <= hi + 1e-12; p += step) {
        double v = eval_params(q, arity, 0, {p}, n_search, seed);
        if (v > best_v) { best_v = v; best_p = p; }
    }
    for (double p = std::max(0.005, best_p - step); p <= std::min(hi, best_p + step) + 1e-12;
         p += step / 4.0) {
        double v = eval_params(q, arity, 0, {p}, n_search, seed);
        if (v > best_v) { best_v = v; best_p = p; }
    }
    return best_p;
}

} // namespace

SimRateResult oiid_rate(double q, Arity arity, long long n, int n_seeds, std::uint64_t seed0) {
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("oiid_rate: q outside [0,1]");
    SimRateResult r;
    if (q == 0.0 || q == 1.0) {
        r.rate = q == 0.0 ? 0.0 : (arity == Arity::Binary ? 1.0 : kLog2_3);
        r.analytic = true;
        r.params = {q == 0.0 ? 0.0 : (arity == Arity::Binary ? 0.5 : 1.0 / 3.0)};
        return r;
    }
    long long n_search = std::max<long long>(n / 4, 250'000);
    double p = search_iid_p(q, arity, n_search, seed0);
    r = finalize(q, arity, 0, {p}, n, n_seeds, seed0);
    return r;
}

SimRateResult markov_rate(double q, Arity arity, int order, long long n, int n_seeds,
                          std::uint64_t seed0) {
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("markov_rate: q outside [0,1]");
    if (order < 1 || order > 2)
        throw std::invalid_argument("markov_rate: only orders 1 and 2 are tractable");
    SimRateResult r;
    if (q == 0.0 || q == 1.0) {
        r.rate = q == 0.0 ? 0.0 : (arity == Arity::Binary ? 1.0 : kLog2_3);
        r.analytic = true;
        r.order = order;
        return r;
    }
    long long n_search = std::max<long long>(n / 4, 250'000);
    double lo = 0.01, hi = p_hi(arity);
    auto clampp = [&](double x) { return std::clamp(x, lo, hi); };
    double p0 = search_iid_p(q, arity, n_search, seed0);

    if (order == 1) {
        SearchPoint best;
        for (double step : {0.04, 0.01}) {
            double ca = best.params.empty() ? p0 : best.params[0];
            double cb = best.params.empty() ? p0 : best.params[1];
            double span = step * 4.0;
            for (double a = clampp(ca - span); a <= clampp(ca + span) + 1e-12; a += step)
                for (double b = clampp(cb - span); b <= clampp(cb + span) + 1e-12; b += step) {
                    double v = eval_params(q, arity, 1, {a, b}, n_search, seed0);
                    if (v > best.value) best = {{a, b}, v};
                }
        }
        return finalize(q, arity, 1, best.params, n, n_seeds, seed0);
    }

    // order 2: lift the order-1 optimum, then greedy coordinate pattern search
    SearchPoint m1;
    for (double step : {0.04, 0.01}) {
        double ca = m1.params.empty() ? p0 : m1.params[0];
        double cb = m1.params.empty() ? p0 : m1.params[1];
        double span = step * 4.0;
        for (double a = clampp(ca - span); a <= clampp(ca + span) + 1e-12; a += step)
            for (double b = clampp(cb - span); b <= clampp(cb + span) + 1e-12; b += step) {
                double v = eval_params(q, arity, 1, {a, b}, n_search, seed0);
                if (v > m1.value) m1 = {{a, b}, v};
            }
    }
    // history is (recent, older); class index recent + 2*older
    std::vector<double> params = {m1.params[0], m1.params[1], m1.params[0], m1.params[1]};
    double best_v = eval_params(q, arity, 2, params, n_search, seed0);
    for (double step : {0.04, 0.02, 0.01}) {
        bool improved = true;
        int rounds = 0;
        while (improved && rounds++ < 4) {
            improved = false;
            for (int c = 0; c < 4; ++c) {
                for (double dir : {+1.0, -1.0}) {
                    std::vector<double> cand = params;
                    cand[c] = clampp(cand[c] + dir * step);
                    if (cand[c] == params[c]) continue;
                    double v = eval_params(q, arity, 2, cand, n_search, seed0);
                    if (v > best_v) {
                        best_v = v;
                        params = cand;
                        improved = true;
                    }
                }
            }
        }
    }
    return finalize(q, arity, 2, params, n, n_seeds, seed0);
}

} // namespace behc::hmm
