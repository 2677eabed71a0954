#pragma once

#include "esn/lyapunov.hpp"
#include "esn/profile.hpp"
#include "esn/readout.hpp"
#include "esn/replica.hpp"
#include "esn/reservoir.hpp"
#include "esn/serialization.hpp"
#include "esn/signals.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace esn {

std::string_view version();

/// Malformed configuration or command-line input (exit code 1).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct ExperimentConfig {
    std::string experiment = "memory";
    NetworkSpec network;             ///< size, wiring, bias, input_dim; radius and seed are per cell
    Index length = 100000;           ///< drive length T
    std::size_t washout = 1000;
    std::vector<double> rho = {1.0};
    std::vector<double> noise = {0.0};
    std::vector<double> lambda = {0.0};
    int replicas = 2;
    int realizations = 1;
    std::uint64_t seed = 1;
    std::string output_dir = "out";
    int threads = 0;                 ///< 0 = hardware concurrency

    // memory
    int max_lag = 50;
    double ridge = 1e-6;
    double noise_base_rho = 1.0;     ///< spectral radius of the noise-driven comparison runs
    std::optional<double> match_rho; ///< when set, tune r at noise_base_rho to this network's consistency
    double match_tolerance = 0.01;

    // sections
    std::vector<int> section_lags = {0, 1, 2, 3};
    std::vector<double> section_grid = linspace(-3.0, 3.0, 61);
    std::vector<int> section_nodes;  ///< empty: three highest-variance nodes
    double section_consistent_rho = 2.2;
    double section_inconsistent_rho = 3.0;
    bool section_shared_initial_state = false;

    // lyapunov
    std::size_t lyapunov_steps = 10000;
    int reortho_interval = 1;
    int lyapunov_exponents = 0;
    double consistency_threshold = 0.99;

    // profile
    double profile_consistent_rho = 1.0;
    double profile_inconsistent_rho = 3.0;
    std::optional<double> profile_target_consistency = 0.15;
    double profile_rho = 4.0;        ///< used when no target consistency is set
    double effective_threshold = 0.5;
    double null_threshold = kDefaultNullThreshold;
    std::size_t test_system_length = 1000000;

    // sweep
    std::vector<std::string> metrics = {"consistency"};
};

/// Paper-sized defaults for a recipe: sections N=200/p=0.025, memory N=500/p=0.10,
/// lyapunov and sweep N=200/p=0.10, profile N=100/p=0.10; T=1e5, washout 1000.
ExperimentConfig default_config(const std::string& experiment);

/// Overlays the fields present in `doc` onto `base`. Unknown fields and
/// ill-typed values raise ConfigError naming the field.
ExperimentConfig config_from_json(const json& doc, ExperimentConfig base);
json config_to_json(const ExperimentConfig& config);
void validate_config(const ExperimentConfig& config);

/// "a,b,c" or "start:step:stop" (inclusive, rounded to the step).
std::vector<double> parse_grid(const std::string& text);

/// Deterministic per-realization seeds.
std::uint64_t network_seed(std::uint64_t master, int realization);
std::uint64_t drive_seed(std::uint64_t master, int realization);
std::uint64_t replica_seed(std::uint64_t master, int realization);

/// Runs fn(0..count-1) on up to `threads` workers (0 = auto). Exceptions are
/// captured per index and returned in index order (empty string = success).
std::vector<std::string> parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

/// Base (unscaled-radius) network of a realization; rescale per grid point.
NetworkRealization realization_network(const ExperimentConfig& config, int realization);

/// gamma-hat^2 of a two-replica run.
double replica_consistency(const NetworkRealization& net, std::shared_ptr<const Drive> drive, std::size_t washout,
                           double noise_mix, std::uint64_t seed);

/// First grid value whose metric satisfies `pred`, if any.
std::optional<double> first_where(std::span<const double> grid, std::span<const double> values,
                                  const std::function<bool(double)>& pred);

struct NoiseMatch {
    double noise_mix = 0.0;
    double consistency = 1.0;
    int iterations = 0;
};

/// Bisects r in [0, 1] so that gamma-hat^2 of the noisy network matches
/// `target` within `tolerance`; returns the closest point found.
NoiseMatch match_noise_consistency(const NetworkRealization& net, std::shared_ptr<const Drive> drive,
                                   std::size_t washout, double target, double tolerance, std::uint64_t seed,
                                   int max_iterations = 30);

struct RadiusMatch {
    double rho = 0.0;
    double consistency = 1.0;
    int iterations = 0;
};

/// Bisects the spectral radius in [lo, hi] (consistency assumed decreasing
/// in rho there) so that gamma-hat^2 lands within `tolerance` of `target`.
RadiusMatch match_radius_consistency(const NetworkRealization& base, std::shared_ptr<const Drive> drive,
                                     std::size_t washout, double target, double tolerance, std::uint64_t seed,
                                     double lo, double hi, int max_iterations = 30);

/// Responses x_i(T) for one lag: rows follow `grid`, columns follow `nodes`.
/// Run k starts from random_initial_state(seed, k) unless `shared_initial_state`.
MatrixXd section_portrait(const NetworkRealization& net, const Drive& reference, Index lag,
                          std::span<const double> grid, std::span<const int> nodes, std::uint64_t seed,
                          bool shared_initial_state);

/// Indices of the `count` nodes with the largest variance, ascending index order.
std::vector<int> highest_variance_nodes(const Trajectory& trajectory, int count);

/// Subcommands. Each writes CSV artifacts with JSON sidecars under
/// config.output_dir and returns a process exit code.
int cmd_sections(const ExperimentConfig& config);
int cmd_memory(const ExperimentConfig& config);
int cmd_lyapunov(const ExperimentConfig& config);
int cmd_profile(const ExperimentConfig& config);
int cmd_sweep(const ExperimentConfig& config);
int cmd_generate_net(const ExperimentConfig& config);

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;
inline constexpr int kExitPartial = 3;

}  // namespace esn
