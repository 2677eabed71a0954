#pragma once

#include "esn/reservoir.hpp"
#include "esn/signals.hpp"
#include "esn/types.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace esn {

/// K >= 2 responses of one reservoir to one drive.
struct ReplicaEnsemble {
    std::vector<Trajectory> replicas;
    std::shared_ptr<const Drive> drive;        ///< may be null for synthetic ensembles
    std::vector<std::uint64_t> initial_seeds;  ///< per replica
    std::vector<std::uint64_t> noise_seeds;    ///< per replica
    double noise_mix = 0.0;

    std::size_t size() const { return replicas.size(); }
    /// Throws std::invalid_argument unless K >= 2 and all shapes agree.
    void validate() const;
};

struct ReplicaOptions {
    std::size_t washout = 1000;
    double noise_mix = 0.0;
    InputAlignment alignment = InputAlignment::concurrent;
    /// Explicit initial states, one per replica; drawn uniform on (-1, 1) when empty.
    std::vector<VectorXd> initial_states;
};

/// Runs K replicas with a shared drive. Replica k draws its initial state
/// from (master_seed, initial_state, k) and its noise from
/// derive_seed(master_seed, noise, k).
ReplicaEnsemble replica_run(const NetworkRealization& net, std::shared_ptr<const Drive> drive, int replicas,
                            std::uint64_t master_seed, const ReplicaOptions& options = {});

/// Variance threshold below which a node is excluded from consistency averages.
inline constexpr double kVarianceFloor = 1e-12;

/// Per-node Pearson correlation of two equally shaped trajectories. Nodes
/// whose population variance falls below kVarianceFloor in either series are NaN.
VectorXd node_consistency(const StateMatrix& a, const StateMatrix& b);

/// Mean of the finite entries. Throws Error("degenerate ensemble") when none are.
double global_consistency(const VectorXd& node_values);

/// Pearson correlation of two readout series.
/// Throws Error("zero-variance readout") when either is constant.
double readout_consistency(const VectorXd& y, const VectorXd& y_replica);

struct ConsistencyReport {
    VectorXd node;             ///< gamma_i^2, NaN for excluded nodes
    double global = 0.0;       ///< gamma-hat^2
    int excluded = 0;
    Index samples = 0;
};

ConsistencyReport consistency_report(const Trajectory& a, const Trajectory& b);

/// Report on the first replica pair of an ensemble.
ConsistencyReport consistency_report(const ReplicaEnsemble& ensemble);

}  // namespace esn
