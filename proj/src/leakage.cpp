#include "behc/leakage.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace behc::leakage {

namespace {

constexpr double kLog2_3 = 1.5849625007211562;
constexpr double kDegenerateCap = 1e-12;

double delta_t(double q, int t) {
    double bt = std::pow(1.0 - q, t);
    if (bt <= 0.0) return 0.0;
    if (bt >= 1.0) return 0.0;
    return (-bt * std::log2(bt) - (1.0 - bt) * std::log2(1.0 - bt)) / (1.0 - bt);
}

} // namespace

InnerSolution max_entropy_prefix_capped(const std::vector<double>& cost_bits,
                                        const std::vector<double>& prefix_cap) {
    const int T = static_cast<int>(cost_bits.size());
    if (T == 0) throw std::invalid_argument("max_entropy_prefix_capped: empty cost vector");
    if (static_cast<int>(prefix_cap.size()) > T - 1)
        throw std::invalid_argument("max_entropy_prefix_capped: a cap on the full support "
                                    "contradicts sum p = 1");
    InnerSolution sol;
    sol.p.assign(T, 0.0);
    sol.gamma.assign(prefix_cap.size(), 0.0);

    // prefixes with essentially no allowance pin the leading entries to zero
    int start = 0;
    for (int s = 0; s < static_cast<int>(prefix_cap.size()); ++s) {
        if (prefix_cap[s] < kDegenerateCap) start = s + 1;
        else break;
    }

    double cmin = *std::min_element(cost_bits.begin() + start, cost_bits.end());
    std::vector<double> w(T, 0.0);
    for (int t = start; t < T; ++t) w[t] = std::exp2(-(cost_bits[t] - cmin));

    // Sweep prefixes in increasing order. Within each segment the solution
    // keeps the Gibbs shape A_j * w; the binding prefix is the one needing the
    // smallest normalizer, which makes successive normalizers nondecreasing
    // (dual feasibility) and every interior prefix slack. Weight sums restart
    // at each segment head, so the enormous dynamic range of the tail weights
    // never cancels against the head.
    const int n_caps = static_cast<int>(prefix_cap.size());
    std::vector<double> seg_slope;
    std::vector<int> seg_end; // last 0-based index of each tight segment
    int a = start;
    double consumed = 0.0;
    while (a < T) {
        double acc = 0.0, best_ratio = 0.0, total = 0.0;
        int best_s = -1;
        for (int s = a; s < T; ++s) {
            acc += w[s];
            if (s < n_caps) {
                double ratio = (std::min(prefix_cap[s], 1.0) - consumed) / acc;
                if (best_s < 0 || ratio <= best_ratio) {
                    best_ratio = ratio;
                    best_s = s;
                }
            }
            total = acc;
        }
        double a_rest = (1.0 - consumed) / total;
        if (best_s < 0 || best_ratio >= a_rest) {
            for (int t = a; t < T; ++t) sol.p[t] = a_rest * w[t];
            seg_slope.push_back(a_rest);
            seg_end.push_back(T - 1);
            break;
        }
        for (int t = a; t <= best_s; ++t) sol.p[t] = best_ratio * w[t];
        seg_slope.push_back(best_ratio);
        seg_end.push_back(best_s);
        consumed = std::min(prefix_cap[best_s], 1.0);
        a = best_s + 1;
    }

    sol.segments = static_cast<int>(seg_slope.size());
    for (int j = 0; j + 1 < sol.segments; ++j) {
        int s_j = seg_end[static_cast<std::size_t>(j)]; // boundary prefix, 0-based
        if (s_j < n_caps)
            sol.gamma[s_j] = std::log2(seg_slope[static_cast<std::size_t>(j + 1)] /
                                       seg_slope[static_cast<std::size_t>(j)]);
    }
    double obj = 0.0;
    for (int t = 0; t < T; ++t) {
        if (sol.p[t] > 0.0) obj += -sol.p[t] * std::log2(sol.p[t]) - cost_bits[t] * sol.p[t];
    }
    sol.objective = obj;
    return sol;
}

namespace {

LeakageSolution solve(double q, int t_max, double tol, bool ternary) {
    const double cap_rate = ternary ? kLog2_3 : 1.0;
    LeakageSolution out;
    out.q = q;
    out.ternary = ternary;
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("leakage_ub: q outside [0,1]");
    if (q < 1e-4) {
        out.rate = 0.0;
        out.closed_form_limit = true;
        out.converged = true;
        out.note = "q below 1e-4: limit value 0";
        return out;
    }
    if (q > 1.0 - 1e-9) {
        out.rate = cap_rate;
        out.closed_form_limit = true;
        out.converged = true;
        out.note = "q at 1: noiseless DMC limit";
        return out;
    }
    if (t_max <= 0)
        t_max = std::max(static_cast<int>(std::ceil(std::log(1e-10) / std::log(1.0 - q))), 256);

    std::vector<double> deltas(t_max), caps(t_max - 1);
    for (int t = 1; t <= t_max; ++t) deltas[t - 1] = delta_t(q, t);
    for (int s = 1; s < t_max; ++s) caps[s - 1] = 1.0 - std::pow(1.0 - q, s);

    double lambda = 0.0;
    const double bonus = ternary ? 1.0 : 0.0;
    InnerSolution inner;
    std::vector<double> cost(t_max);
    for (int it = 0; it < 200; ++it) {
        for (int t = 1; t <= t_max; ++t) cost[t - 1] = deltas[t - 1] + lambda * t;
        inner = max_entropy_prefix_capped(cost, caps);
        double num = 0.0, et = 0.0;
        for (int t = 1; t <= t_max; ++t) {
            double p = inner.p[t - 1];
            if (p > 0.0) num -= p * std::log2(p);
            num -= deltas[t - 1] * p;
            et += static_cast<double>(t) * p;
        }
        num += bonus;
        double next = std::clamp(num / et, 0.0, cap_rate);
        out.iterations = it + 1;
        if (std::fabs(next - lambda) < tol) {
            lambda = next;
            out.converged = true;
            break;
        }
        lambda = next;
    }
    out.rate = lambda;
    out.lambda = lambda;
    out.mu = lambda;
    out.gamma = inner.gamma;
    out.p_t = prob::Pmf(1, inner.p);
    out.kkt_residual = verify_kkt(out, q);
    if (out.kkt_residual > 1e-6)
        throw std::logic_error("leakage_ub: inner sweep failed its own KKT check");
    return out;
}

} // namespace

LeakageSolution leakage_ub(double q, int t_max, double tol) {
    return solve(q, t_max, tol, false);
}

LeakageSolution leakage_ub_ternary(double q, int t_max, double tol) {
    return solve(q, t_max, tol, true);
}

double verify_kkt(const LeakageSolution& sol, double q) {
    if (sol.closed_form_limit) return 0.0;
    const auto& mass = sol.p_t.mass();
    const int T = static_cast<int>(mass.size());
    double residual = 0.0;

    // suffix sums of the prefix multipliers enter the stationarity condition:
    // log2 p(t) + Delta_t + mu t + sum_{s>=t} gamma_s is constant on the support
    std::vector<double> suffix(T + 1, 0.0);
    for (int t = T - 1; t >= 1; --t)
        suffix[t] = suffix[t + 1] + (t - 1 < static_cast<int>(sol.gamma.size()) ? sol.gamma[t - 1] : 0.0);

    double ref = 0.0;
    bool have_ref = false;
    for (int t = 1; t <= T; ++t) {
        double p = mass[t - 1];
        if (p <= 0.0) continue;
        double r = std::log2(p) + delta_t(q, t) + sol.mu * t + suffix[t];
        if (!have_ref) { ref = r; have_ref = true; }
        residual = std::max(residual, std::fabs(r - ref));
    }

    double cum = 0.0;
    for (int s = 1; s < T; ++s) {
        cum += mass[s - 1];
        double cap = 1.0 - std::pow(1.0 - q, s);
        residual = std::max(residual, cum - cap); // primal feasibility
        double g = (s - 1 < static_cast<int>(sol.gamma.size())) ? sol.gamma[s - 1] : 0.0;
        residual = std::max(residual, -g);        // dual feasibility
        residual = std::max(residual, std::fabs(g * (cap - cum))); // complementary slackness
    }
    cum += mass[T - 1];
    residual = std::max(residual, std::fabs(cum - 1.0));
    return residual;
}

} // namespace behc::leakage
