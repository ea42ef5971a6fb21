#pragma once

#include "behc/pmf.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace behc::sim {

// One realized run of the physical channel: arrivals drive the unit battery,
// the encoder sends under the energy constraint, the decoder reads gaps
// between nonzero outputs. Channel use 0 is a silent bootstrap use standing in
// for a virtual preceding transmission, so the first symbol's idle time is
// distributed like every later one.
struct SimTrace {
    // per-channel-use records (up to storage_cap uses)
    std::vector<std::int8_t> arrivals; // E_i
    std::vector<std::int8_t> battery;  // S_i at the start of use i
    std::vector<std::int8_t> inputs;   // X_i (-1/0/1)
    std::vector<std::int8_t> outputs;  // Y_i = X_i
    bool storage_capped = false;

    // per-symbol records
    std::vector<long long> symbol_times; // T_k, gaps between consecutive nonzero outputs
    std::vector<long long> idle_times;   // realized Z_k
    std::vector<int> sent;               // U_k fed to the encoder
    std::vector<int> decoded;            // (T_k - 1) mod N
    std::vector<long long> frame_index;  // floor((T_k - 1)/N), the W2 estimate
    std::vector<std::int8_t> signs_sent;
    std::vector<std::int8_t> signs_decoded;

    struct Stats {
        long long symbols = 0;
        long long steps = 0; // channel uses consumed, bootstrap use included
        long long ones = 0;
        long long arrivals_total = 0;
        long long wasted_arrivals = 0; // harvested while the battery was full
        long long decode_errors = 0;
        long long sign_errors = 0;
        double mean_T = 0.0;
        double var_T = 0.0;
    } stats;

    int frame = 1;
    double q = 0.0;
};

// Modulo encoding: transmit at the earliest energized use whose slot index
// since the previous transmission matches U_k modulo N. p_u must live on
// {0..N-1}.
SimTrace run_modulo(double q, int N, const prob::Pmf& p_u, long long m,
                    std::uint64_t seed, long long storage_cap = 10'000'000);

// Extended encoding: transmit exactly at slot U_k when energy arrived in time,
// otherwise at the earliest later slot congruent to U_k modulo N.
SimTrace run_extended(double q, int N, const prob::Pmf& p_u, long long m,
                      std::uint64_t seed, long long storage_cap = 10'000'000);

// Ternary: each transmission additionally carries one sign bit. signs may be
// empty, in which case they are drawn uniformly.
SimTrace run_ternary(double q, int N, const prob::Pmf& p_u,
                     const std::vector<std::int8_t>& signs, long long m,
                     std::uint64_t seed, long long storage_cap = 10'000'000);

// Plug-in mutual-information estimate from the empirical (U, T) counts.
double empirical_mutual_information(const SimTrace& trace);

// Columnar dump, one row per channel use: index E S X Y.
void dump_trace(const SimTrace& trace, std::ostream& os);

} // namespace behc::sim
