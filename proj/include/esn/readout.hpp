#pragma once

#include "esn/replica.hpp"
#include "esn/reservoir.hpp"
#include "esn/signals.hpp"
#include "esn/types.hpp"

#include <Eigen/Cholesky>

#include <optional>
#include <vector>

namespace esn {

/// y(t) = R . x(t) + R0
struct Readout {
    VectorXd weights;
    double bias = 0.0;
    double ridge = 0.0;         ///< lambda
    std::optional<int> lag;     ///< set when trained on the lagged-input task
};

/// Ridge regression on a fixed design.
///
/// Minimizes sum_t (y(t) - z(t))^2 + lambda^2 * Ts * |R|^2 over R and an
/// unpenalized R0, where Ts is the sample count. With this scaling, ridge
/// parameter lambda matches least squares on states corrupted by additive
/// white noise of standard deviation lambda. The centered Gram matrix is
/// factored once, so fitting many targets on the same states is cheap.
class RidgeSolver {
public:
    /// Throws Error("rank-deficient design; increase lambda") when the
    /// penalized normal matrix is numerically singular.
    RidgeSolver(StateMatrix states, double ridge);

    Readout fit(const VectorXd& target) const;
    /// One readout per column of `targets`.
    std::vector<Readout> fit(const MatrixXd& targets) const;

    Index samples() const { return states_.rows(); }
    double ridge() const { return ridge_; }

private:
    StateMatrix states_;
    VectorXd mean_;
    double ridge_;
    Eigen::LDLT<MatrixXd> factor_;
};

Readout ridge_fit(const StateMatrix& states, const VectorXd& target, double ridge);

VectorXd apply_readout(const StateMatrix& states, const Readout& readout);

struct MemoryOptions {
    int max_lag = 50;
    double ridge = 1e-6;
    double train_fraction = 0.5;  ///< contiguous leading block used for training
};

/// Lagged-input reconstruction results.
struct MemoryProfile {
    std::vector<int> lags;
    VectorXd accuracy;              ///< held-out M(tau)
    VectorXd accuracy_in_sample;    ///< M(tau) on the training block
    VectorXd readout_consistency;   ///< held-out Gamma_R(tau)^2, empty without replica
    double capacity = 0.0;          ///< sum over tau >= 1 of M(tau)^2
    Index train_samples = 0;
    Index test_samples = 0;
    double ridge = 0.0;

    bool has_replica() const { return readout_consistency.size() > 0; }
};

/// Trains one readout per lag on z_tau(t) = u(t - tau) and scores it on the
/// held-out block. When `replica` is given, the same readout is applied to it
/// and Gamma_R(tau)^2 is reported. Requires a scalar drive.
MemoryProfile memory_task(const Trajectory& states, const Drive& drive, const MemoryOptions& options,
                          const Trajectory* replica = nullptr);

/// Convenience overload: simulates the network (two replicas when
/// `with_replica`) from seeded random initial states, then scores it.
MemoryProfile memory_task(const NetworkRealization& net, std::shared_ptr<const Drive> drive,
                          const MemoryOptions& options, std::size_t washout, bool with_replica,
                          std::uint64_t seed, double noise_mix = 0.0);

/// Truncated memory capacity, sum_{tau=1}^{max_lag} M(tau)^2.
double memory_capacity(const MemoryProfile& profile);

}  // namespace esn
