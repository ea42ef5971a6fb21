#include "behc/closed_form.hpp"

#include "behc/pmf.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace behc::closed_form {

using prob::binary_entropy;

namespace {

constexpr double kLog2_3 = 1.5849625007211562; // log2(3)

double ternary_sym_entropy(double side) {
    // entropy of (side, 1-2*side, side)
    double mid = 1.0 - 2.0 * side;
    double h = 0.0;
    if (side > 0.0) h -= 2.0 * side * std::log2(side);
    if (mid > 0.0) h -= mid * std::log2(mid);
    return h;
}

} // namespace

ScalarOptResult maximize_scalar(const std::function<double(double)>& f,
                                double lo, double hi, double tol) {
    if (!(lo < hi)) throw std::invalid_argument("maximize_scalar: lo must be < hi");
    if (!(tol > 0.0)) throw std::invalid_argument("maximize_scalar: tol must be > 0");
    constexpr int kGrid = 1000;
    auto eval = [&](double x) {
        double v = f(x);
        if (!std::isfinite(v))
            throw std::runtime_error("maximize_scalar: non-finite objective at x=" + std::to_string(x));
        return v;
    };
    int best = 0;
    double best_v = eval(lo);
    double step = (hi - lo) / kGrid;
    for (int i = 1; i <= kGrid; ++i) {
        double v = eval(lo + step * i);
        if (v > best_v) { best_v = v; best = i; }
    }
    double a = lo + step * (best > 0 ? best - 1 : 0);
    double b = lo + step * (best < kGrid ? best + 1 : kGrid);

    constexpr double invphi = 0.6180339887498949;
    double c = b - invphi * (b - a), d = a + invphi * (b - a);
    double fc = eval(c), fd = eval(d);
    int it = 0;
    while (b - a > tol && it < 400) {
        if (fc >= fd) {
            b = d; d = c; fd = fc;
            c = b - invphi * (b - a); fc = eval(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + invphi * (b - a); fd = eval(d);
        }
        ++it;
    }
    double x = 0.5 * (a + b);
    return {x, eval(x), kGrid + 1 + it};
}

BoundResult genie_ub_binary(double q) {
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("genie_ub_binary: q outside [0,1]");
    if (q == 0.0) return {0.0, 0.0, 0};
    if (q == 1.0) return {1.0, 0.5, 0}; // reduces to max_p H2(p)
    auto r = maximize_scalar(
        [q](double p) { return q * binary_entropy(p) / (q + p * (1.0 - q)); }, 0.0, 1.0);
    return {r.value, r.argmax, r.iterations};
}

BoundResult genie_ub_ternary(double q) {
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("genie_ub_ternary: q outside [0,1]");
    if (q == 0.0) return {0.0, 0.0, 0};
    if (q == 1.0) return {kLog2_3, 2.0 / 3.0, 0}; // max_p H2(p)+p, attained at p=2/3
    auto r = maximize_scalar(
        [q](double p) { return (q * binary_entropy(p) + p * q) / (q + p * (1.0 - q)); }, 0.0, 1.0);
    return {r.value, r.argmax, r.iterations};
}

BoundResult zero_storage_binary(double q) {
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("zero_storage_binary: q outside [0,1]");
    if (q == 0.0) return {0.0, 0.0, 0};
    if (q == 1.0) return {1.0, 0.5, 0};
    auto r = maximize_scalar(
        [q](double p) { return binary_entropy(p * q) - p * binary_entropy(q); }, 0.0, 1.0);
    return {r.value, r.argmax, r.iterations};
}

BoundResult zero_storage_ternary(double q) {
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("zero_storage_ternary: q outside [0,1]");
    if (q == 0.0) return {0.0, 0.0, 0};
    if (q == 1.0) return {kLog2_3, 1.0 / 3.0, 0};
    auto r = maximize_scalar(
        [q](double p) { return ternary_sym_entropy(p * q) - 2.0 * p * binary_entropy(q); },
        0.0, 0.5);
    return {r.value, r.argmax, r.iterations};
}

double infinite_storage_binary(double q) {
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("infinite_storage_binary: q outside [0,1]");
    if (q == 0.0) return 0.0;
    if (q == 1.0) return 1.0;
    return q <= 0.5 ? binary_entropy(q) : 1.0;
}

double infinite_storage_ternary(double q) {
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("infinite_storage_ternary: q outside [0,1]");
    if (q == 0.0) return 0.0;
    if (q == 1.0) return kLog2_3;
    return q <= 2.0 / 3.0 ? ternary_sym_entropy(q / 2.0) : kLog2_3;
}

BoundResult niid_binary(double q) {
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("niid_binary: q outside [0,1]");
    if (q == 0.0) return {0.0, 0.0, 0};
    if (q == 1.0) return {1.0, 0.5, 0};
    auto r = maximize_scalar(
        [q](double p) {
            double rho = q / (p + q - p * q);
            return binary_entropy(p * rho) - p * binary_entropy(rho);
        },
        0.0, 1.0);
    return {r.value, r.argmax, r.iterations};
}

BoundResult niid_ternary(double q) {
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("niid_ternary: q outside [0,1]");
    if (q == 0.0) return {0.0, 0.0, 0};
    if (q == 1.0) return {kLog2_3, 1.0 / 3.0, 0};
    auto r = maximize_scalar(
        [q](double p) {
            double rho = q / (2.0 * p + q - 2.0 * p * q);
            return ternary_sym_entropy(p * rho) - 2.0 * p * binary_entropy(rho);
        },
        0.0, 0.5);
    return {r.value, r.argmax, r.iterations};
}

double genie_stationarity_residual(double q, double p) {
    if (!(p > 0.0 && p < 1.0)) return INFINITY;
    return std::fabs(q - std::log(1.0 - p) / std::log(p));
}

} // namespace behc::closed_form
