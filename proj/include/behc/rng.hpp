#pragma once

#include <cstdint>
#include <random>

namespace behc {

// Seedable 64-bit generator with hand-rolled variate conversions.
// std::mt19937_64 output is pinned by the standard, but the standard
// distributions are not, so uniforms and discrete draws are derived here
// directly from the raw 64-bit stream. Traces are therefore bit-exact
// reproducible from (seed, parameters) across platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t raw() { return eng_(); }

    // Uniform double in [0,1) with 53 random bits.
    double uniform() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return uniform() < p; }

    // Index sampled from a probability vector by CDF walk.
    template <typename Vec>
    int discrete(const Vec& probs) {
        double u = uniform(), acc = 0.0;
        int last = 0;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            if (probs[i] <= 0.0) continue;
            acc += probs[i];
            last = static_cast<int>(i);
            if (u < acc) return last;
        }
        return last; // u landed in residual rounding mass
    }

    // Geometric(q) on {0,1,...}: failures before the first success.
    long long geometric(double q) {
        long long z = 0;
        while (!bernoulli(q)) ++z;
        return z;
    }

private:
    std::mt19937_64 eng_;
};

} // namespace behc
