#include "behc/closed_form.hpp"
#include "behc/pmf.hpp"

#include <doctest.h>

#include <cmath>

using namespace behc;
using namespace behc::closed_form;
using prob::binary_entropy;

namespace {

constexpr double kLog2_3 = 1.5849625007211562;

// dense-grid oracle for one-dimensional maxima
double grid_max(const std::function<double(double)>& f, double lo, double hi, double step) {
    double best = f(lo);
    for (double x = lo + step; x <= hi + step / 2; x += step) best = std::max(best, f(std::min(x, hi)));
    return best;
}

} // namespace

TEST_CASE("maximize_scalar basics") {
    auto r = maximize_scalar([](double x) { return -(x - 0.3) * (x - 0.3); }, 0.0, 1.0, 1e-9);
    CHECK(r.argmax == doctest::Approx(0.3).epsilon(1e-7));
    auto h = maximize_scalar([](double x) { return binary_entropy(x); }, 0.0, 1.0);
    CHECK(h.argmax == doctest::Approx(0.5).epsilon(1e-7));
    CHECK(h.value == doctest::Approx(1.0).epsilon(1e-12));
    auto g = maximize_scalar(
        [](double p) { return 0.5 * binary_entropy(p) / (0.5 + p * 0.5); }, 0.0, 1.0);
    
    CHECK(std::fabs(g.value - 0.6942) < 5e-4);
    CHECK_THROWS(maximize_scalar([](double) { return std::nan(""); }, 0.0, 1.0));
    CHECK_THROWS(maximize_scalar([](double x) { return x; }, 1.0, 0.0));
}

TEST_CASE("genie bound binary") {
    CHECK(std::fabs(genie_ub_binary(0.1).value - 0.2600) < 5e-4);
    CHECK(std::fabs(genie_ub_binary(0.5).value - 0.6942) < 5e-4);
    CHECK(genie_ub_binary(1.0).value == 1.0);
    CHECK(genie_ub_binary(0.0).value == 0.0);
    // stationarity relation q = log(1-p*)/log(p*)
    for (double q : {0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95}) {
        auto r = genie_ub_binary(q);
        CHECK(genie_stationarity_residual(q, r.p_star) < 1e-6);
    }
    // the q=0.5 optimizer is (3 - sqrt 5)/2
    CHECK(genie_ub_binary(0.5).p_star == doctest::Approx((3.0 - std::sqrt(5.0)) / 2.0).epsilon(1e-6));
}

TEST_CASE("genie bound ternary") {
    CHECK(genie_ub_ternary(1.0).value == kLog2_3);
    CHECK(genie_ub_ternary(0.0).value == 0.0);
    double q = 0.5;
    double oracle = grid_max(
        [q](double p) { return (q * binary_entropy(p) + p * q) / (q + p * (1 - q)); }, 0.0, 1.0,
        1e-6);
    CHECK(genie_ub_ternary(q).value == doctest::Approx(oracle).epsilon(1e-9));
    CHECK(genie_ub_ternary(0.5).value == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("zero and infinite storage binary") {
    CHECK(zero_storage_binary(1.0).value == 1.0);
    CHECK(zero_storage_binary(0.0).value == 0.0);
    double q = 0.5;
    double oracle =
        grid_max([q](double p) { return binary_entropy(p * q) - p * binary_entropy(q); }, 0.0, 1.0,
                 1e-6);
    CHECK(zero_storage_binary(q).value == doctest::Approx(oracle).epsilon(1e-9));
    CHECK(zero_storage_binary(0.5).value == doctest::Approx(0.3219280948873624).epsilon(1e-9));
    CHECK(zero_storage_binary(0.5).value <= infinite_storage_binary(0.5));

    CHECK(infinite_storage_binary(0.5) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(infinite_storage_binary(0.8) == 1.0);
    CHECK(infinite_storage_binary(0.2) == doctest::Approx(0.7219280948873623).epsilon(1e-12));
}

TEST_CASE("zero and infinite storage ternary") {
    CHECK(zero_storage_ternary(0.0).value == 0.0);
    CHECK(zero_storage_ternary(1.0).value == kLog2_3);
    CHECK(zero_storage_ternary(0.5).value == doctest::Approx(0.5849625007211561).epsilon(1e-9));
    CHECK(infinite_storage_ternary(2.0 / 3.0) == doctest::Approx(kLog2_3).epsilon(1e-12));
    CHECK(infinite_storage_ternary(1.0) == kLog2_3);
    CHECK(infinite_storage_ternary(0.3) == doctest::Approx(1.1812908992306925).epsilon(1e-12));
}

TEST_CASE("naive iid rates") {
    CHECK(niid_binary(1.0).value == 1.0);
    CHECK(niid_binary(0.0).value == 0.0);
    double q = 0.5;
    double oracle = grid_max(
        [q](double p) {
            double rho = q / (p + q - p * q);
            return binary_entropy(p * rho) - p * binary_entropy(rho);
        },
        0.0, 1.0, 1e-6);
    CHECK(niid_binary(0.5).value == doctest::Approx(oracle).epsilon(1e-9));
    CHECK(niid_binary(0.5).value == doctest::Approx(0.5458856336593197).epsilon(1e-9));

    CHECK(niid_ternary(1.0).value == kLog2_3);
    CHECK(niid_ternary(0.0).value == 0.0);
    CHECK(niid_ternary(0.5).value == doctest::Approx(0.8039504938891653).epsilon(1e-9));
    CHECK(niid_ternary(0.5).value > niid_binary(0.5).value);
}

TEST_CASE("monotonicity and ordering across q") {
    double prev[8] = {0, 0, 0, 0, 0, 0, 0, 0};
    for (int i = 0; i <= 20; ++i) {
        double q = 0.05 * i;
        double vals[8] = {genie_ub_binary(q).value,    zero_storage_binary(q).value,
                          infinite_storage_binary(q),  niid_binary(q).value,
                          genie_ub_ternary(q).value,   zero_storage_ternary(q).value,
                          infinite_storage_ternary(q), niid_ternary(q).value};
        for (int k = 0; k < 8; ++k) {
            CHECK(vals[k] >= prev[k] - 1e-9);
            prev[k] = vals[k];
        }
        CHECK(vals[1] <= vals[2] + 1e-9);            // ZS <= IS
        CHECK(vals[3] <= vals[0] + 1e-6);            // NIID <= genie
        CHECK(vals[5] <= vals[6] + 1e-9);            // ternary ZS <= IS
        CHECK(vals[7] <= vals[4] + 1e-6);            // ternary NIID <= genie
    }
}

TEST_CASE("endpoint values") {
    CHECK(genie_ub_binary(0.0).value == 0.0);
    CHECK(genie_ub_binary(1.0).value == 1.0);
    CHECK(zero_storage_binary(1.0).value == 1.0);
    CHECK(infinite_storage_binary(1.0) == 1.0);
    CHECK(niid_binary(1.0).value == 1.0);
    CHECK(genie_ub_ternary(1.0).value == kLog2_3);
    CHECK(zero_storage_ternary(1.0).value == kLog2_3);
    CHECK(infinite_storage_ternary(1.0) == kLog2_3);
    CHECK(niid_ternary(1.0).value == kLog2_3);
}
