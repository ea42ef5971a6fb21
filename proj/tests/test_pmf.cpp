#include "behc/pmf.hpp"
#include "behc/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace behc;
using namespace behc::prob;

TEST_CASE("entropy of basic pmfs") {
    CHECK(entropy(Pmf::point(3)) == 0.0);
    CHECK(entropy(Pmf::uniform(0, 3)) == doctest::Approx(2.0).epsilon(1e-15));
    Pmf p(0, {0.5, 0.25, 0.25});
    CHECK(entropy(p) == doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("pmf validation and normalization") {
    CHECK_THROWS(Pmf(0, {}));
    CHECK_THROWS(Pmf(0, {0.5, -0.1}));
    CHECK_THROWS(Pmf(0, {0.0, 0.0}));
    Pmf p(2, {2.0, 6.0});
    CHECK(p(2) == doctest::Approx(0.25));
    CHECK(p(3) == doctest::Approx(0.75));
    CHECK(p(4) == 0.0);
    CHECK(p.mean() == doctest::Approx(2.75));
}

TEST_CASE("binary entropy") {
    CHECK(binary_entropy(0.5) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(binary_entropy(0.0) == 0.0);
    CHECK(binary_entropy(1.0) == 0.0);
    CHECK(binary_entropy(0.11) == doctest::Approx(0.499915958164528).epsilon(1e-13));
    CHECK(std::fabs(binary_entropy(0.11) - 0.5) < 1e-4);
    CHECK_THROWS(binary_entropy(-0.01));
    CHECK_THROWS(binary_entropy(1.01));
}

TEST_CASE("geometric family") {
    Pmf unit = geometric(1.0, 10);
    CHECK(unit.size() == 1);
    CHECK(unit(0) == 1.0);

    Pmf g5 = geometric(0.5, 60);
    CHECK(g5.mean() == doctest::Approx(1.0).epsilon(1e-9));
    Pmf g2 = geometric(0.2, 200);
    CHECK(g2.mean() == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(g2.truncation_residual() < 1e-12);

    CHECK_THROWS(geometric(0.0, 100));
    CHECK_THROWS(geometric(-0.3, 100));
    CHECK_THROWS(geometric(0.5, 5)); // tail 0.5^6 far above tolerance
}

TEST_CASE("truncated geometric gap examples") {
    CHECK(truncated_geom_gap(0.5, 1) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(truncated_geom_gap(0.5, 50) == doctest::Approx(0.0).epsilon(1e-10));
    double direct = binary_entropy(0.49) / 0.51;
    CHECK(truncated_geom_gap(0.3, 2) == doctest::Approx(direct).epsilon(1e-14));
    CHECK(truncated_geom_gap(0.3, 2) == doctest::Approx(1.9602185132408037).epsilon(1e-14));
}

TEST_CASE("gap equals full-entropy difference") {
    for (double q : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        int big = static_cast<int>(std::ceil(std::log(1e-14) / std::log(1.0 - q)));
        double h_full = entropy(geometric(q, big, 1e-13));
        for (int t = 1; t <= 40; ++t) {
            double gap = truncated_geom_gap(q, t);
            double h_trunc = entropy(truncated_geometric(q, t));
            CHECK(gap == doctest::Approx(h_full - h_trunc).epsilon(1e-9));
        }
    }
}

TEST_CASE("gap decreases in t") {
    for (double q : {0.2, 0.5, 0.8}) {
        double prev = truncated_geom_gap(q, 1);
        for (int t = 2; t <= 100; ++t) {
            double cur = truncated_geom_gap(q, t);
            CHECK(cur < prev);
            prev = cur;
        }
    }
}

TEST_CASE("entropy is concave under mixing") {
    Rng rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 2 + static_cast<int>(rng.raw() % 8);
        std::vector<double> a(n), b(n);
        for (int i = 0; i < n; ++i) {
            a[i] = rng.uniform() + 1e-3;
            b[i] = rng.uniform() + 1e-3;
        }
        Pmf pa(0, a), pb(0, b);
        double lam = rng.uniform();
        std::vector<double> mix(n);
        for (int i = 0; i < n; ++i) mix[i] = lam * pa.mass()[i] + (1 - lam) * pb.mass()[i];
        double lhs = entropy(Pmf(0, mix));
        double rhs = lam * entropy(pa) + (1 - lam) * entropy(pb);
        CHECK(lhs >= rhs - 1e-12);
    }
}
