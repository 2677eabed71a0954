#pragma once

#include <cstdint>
#include <random>

namespace esn {

using Rng = std::mt19937_64;

/// Stream indices. Every random quantity in the library is drawn from its own
/// stream so that, e.g., replicas can share a drive while differing only in
/// their initial-state and noise streams. The numeric values are part of the
/// reproducibility contract and must not be renumbered.
enum class Stream : std::uint64_t {
    weights = 1,           ///< internal connectivity W (mask and values)
    input_weights = 2,     ///< input matrix V
    drive = 3,             ///< driving signal u(t)
    initial_state = 4,     ///< x(t0), one sub-index per replica / run
    noise = 5,             ///< node noise xi(t), one sub-index per replica
    measurement_noise = 6, ///< additive readout noise, one sub-index per replica
    test_system = 7,       ///< coefficient processes of the 2-D test system
    experiment = 8,        ///< per-realization master seeds in experiment recipes
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Derives the seed of stream `stream`, sub-index `index`, from `master`.
std::uint64_t derive_seed(std::uint64_t master, Stream stream, std::uint64_t index = 0) noexcept;

/// Engine seeded with derive_seed(master, stream, index).
Rng make_rng(std::uint64_t master, Stream stream, std::uint64_t index = 0);

}  // namespace esn
