#pragma once

#include "esn/reservoir.hpp"
#include "esn/signals.hpp"
#include "esn/types.hpp"

#include <cstdint>

namespace esn {

/// Derivative of x -> tanh(a(x)) at preactivation a: diag(1 - tanh(a)^2) * W.
MatrixXd jacobian(const VectorXd& preact, const MatrixXd& w);

struct LyapunovOptions {
    std::size_t steps = 10000;   ///< tangent-propagation steps after washout
    std::size_t washout = 1000;
    int reortho_interval = 1;
    int exponents = 0;           ///< leading exponents to track; 0 means all N
    std::uint64_t seed = 0;      ///< initial state stream
    double drift_threshold = 0.005;
};

/// Conditional Lyapunov spectrum of the driven noise-free reservoir.
struct LyapunovReport {
    VectorXd exponents;          ///< nats per step, sorted descending
    std::size_t steps = 0;
    int reortho_interval = 1;
    double ky_dimension = 0.0;
    double negative_fraction = 0.0;
    double drift = 0.0;          ///< max - min of the running lambda_1 over the last 10% of steps
    bool converged = false;
};

/// Propagates an orthonormal frame through the tangent dynamics along the
/// driven trajectory and re-orthonormalizes it by QR every
/// `reortho_interval` steps, accumulating log |R_ii|. The drive must cover
/// washout + steps samples.
LyapunovReport cle_spectrum(const NetworkRealization& net, const Drive& drive, const LyapunovOptions& options);

/// Kaplan-Yorke dimension of a descending spectrum: 0 when lambda_1 < 0,
/// otherwise j + S_j / |lambda_{j+1}| where j is the largest index with a
/// nonnegative partial sum S_j (N if all partial sums are nonnegative).
double kaplan_yorke(const VectorXd& spectrum);

}  // namespace esn
