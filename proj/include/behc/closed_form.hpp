#pragma once

#include <functional>

namespace behc::closed_form {

struct ScalarOptResult {
    double argmax = 0.0;
    double value = 0.0;
    int iterations = 0;
};

// One-dimensional maximization on [lo, hi]: a coarse 1000-point scan picks the
// best bracket, golden-section refines it. The scan guards against local
// maxima of objectives whose unimodality is not established. Non-finite
// objective values abort with a diagnostic.
ScalarOptResult maximize_scalar(const std::function<double(double)>& f,
                                double lo, double hi, double tol = 1e-10);

struct BoundResult {
    double value = 0.0;   // bits per binary channel use
    double p_star = 0.0;  // optimizing parameter
    int iterations = 0;
};

// Genie bound: decoder is handed the idle times, leaving a state-free timing
// channel. Binary: max_p q H2(p) / (q + p(1-q)). Ternary adds the sign bit:
// max_p (q H2(p) + p q) / (q + p(1-q)).
BoundResult genie_ub_binary(double q);
BoundResult genie_ub_ternary(double q);

// Harvest-first encoder with no storage: max_p H2(pq) - p H2(q), and the
// ternary analogue max_p H(pq, 1-2pq, pq) - 2p H2(q).
BoundResult zero_storage_binary(double q);
BoundResult zero_storage_ternary(double q);

// Infinite battery: save-and-transmit gives H2(q) up to q = 1/2, then 1;
// ternary H(q/2, 1-q, q/2) up to q = 2/3, then log2(3).
double infinite_storage_binary(double q);
double infinite_storage_ternary(double q);

// Naive i.i.d. Shannon-strategy rates (memoryless decoding of the stationary
// state): binary max_p H2(p rho) - p H2(rho) with rho = q/(p+q-pq); ternary
// symmetric two-sided variant with rho = q/(2p+q-2pq).
BoundResult niid_binary(double q);
BoundResult niid_ternary(double q);

// Residual of the genie stationarity relation q = log(1-p)/log(p) at p.
double genie_stationarity_residual(double q, double p);

} // namespace behc::closed_form
