#pragma once

#include "esn/types.hpp"

#include <Eigen/SparseCore>

#include <cstdint>
#include <optional>

namespace esn {

struct Drive;

struct NetworkSpec {
    int size = 200;                   ///< N
    double wiring_probability = 0.1;  ///< p, independently per entry (diagonal included)
    double spectral_radius = 1.0;     ///< rho
    int input_dim = 1;                ///< L
    double bias = 1.0;                ///< uniform bias b
    std::uint64_t seed = 0;

    /// Throws std::invalid_argument when a field is out of range.
    void validate() const;
};

/// A fixed reservoir. Immutable after construction.
class NetworkRealization {
public:
    using SparseWeights = Eigen::SparseMatrix<double, Eigen::RowMajor>;

    /// Assembles a realization from explicit matrices. The achieved spectral
    /// radius is measured with a dense eigenvalue solve.
    NetworkRealization(NetworkSpec spec, MatrixXd weights, MatrixXd input_weights, VectorXd bias);

    const NetworkSpec& spec() const { return spec_; }
    const MatrixXd& weights() const { return weights_; }
    const SparseWeights& sparse_weights() const { return sparse_weights_; }
    const MatrixXd& input_weights() const { return input_weights_; }
    const VectorXd& bias() const { return bias_; }
    double achieved_radius() const { return achieved_radius_; }
    int size() const { return static_cast<int>(weights_.rows()); }
    int input_dim() const { return static_cast<int>(input_weights_.cols()); }

    /// Same V and beta, W multiplied by rho / achieved_radius(). Requires a
    /// nonzero radius unless rho == 0.
    NetworkRealization rescaled(double rho) const;

private:
    NetworkRealization(NetworkSpec spec, MatrixXd weights, MatrixXd input_weights, VectorXd bias,
                       double radius);

    NetworkSpec spec_;
    MatrixXd weights_;
    SparseWeights sparse_weights_;
    MatrixXd input_weights_;
    VectorXd bias_;
    double achieved_radius_ = 0.0;
};

/// Draws W (Bernoulli(p) mask, N(0,1) values) and V (U[-1,1]) from the spec
/// seed, then scales W to the requested spectral radius.
/// Throws Error("degenerate connectivity") when the draw has zero radius and rho > 0.
NetworkRealization build_network(const NetworkSpec& spec);

/// max |eigenvalue| of a square matrix.
double spectral_radius(const MatrixXd& w);

/// Which input sample enters the update that produces x(t+1).
enum class InputAlignment {
    concurrent,  ///< x(t+1) = f(x(t), u(t+1)), the noise-free update as printed
    lagged,      ///< x(t+1) = f(x(t), u(t)), the noisy update as printed
};

/// W x + V u + beta.
VectorXd preactivation(const NetworkRealization& net, const VectorXd& x, const VectorXd& u);

/// tanh((1 - r)(W x + V u + beta) + r xi). With r == 0 the noise sample is ignored.
VectorXd step(const VectorXd& x, const VectorXd& u, const NetworkRealization& net, double noise_mix,
              const VectorXd& noise);

struct RunOptions {
    std::size_t washout = 1000;
    double noise_mix = 0.0;
    std::uint64_t noise_seed = 0;
    InputAlignment alignment = InputAlignment::concurrent;
};

/// Iterates `step` over the whole drive starting from `x0` and keeps the
/// states after washout. Node noise, when enabled, is drawn from
/// make_rng(noise_seed, Stream::noise).
/// Throws Error("invalid drive") on non-finite samples.
Trajectory run(const NetworkRealization& net, const Drive& drive, const VectorXd& x0,
               const RunOptions& options = {});

/// Initial state with components uniform on (-1, 1) from
/// make_rng(seed, Stream::initial_state, index).
VectorXd random_initial_state(int size, std::uint64_t seed, std::uint64_t index = 0);

}  // namespace esn
