#pragma once

#include "esn/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace esn {

/// Input sequence u(1..T), one row per time step.
struct Drive {
    StateMatrix samples;  ///< T x L
    std::uint64_t seed = 0;
    std::string distribution = "gaussian";

    Index length() const { return samples.rows(); }
    Index width() const { return samples.cols(); }
};

/// T x L IID standard-normal samples from make_rng(seed, Stream::drive),
/// generated row by row so a longer drive extends a shorter one.
Drive gaussian_drive(Index length, Index width, std::uint64_t seed);

/// One copy of `reference` per grid value with the sample at 1-based time
/// T - lag (channel `channel`) replaced by that value.
std::vector<Drive> perturbed_family(const Drive& reference, Index lag, std::span<const double> grid,
                                    Index channel = 0);

/// `count` equispaced points on [lo, hi].
std::vector<double> linspace(double lo, double hi, int count);

/// CSV with header "t,u0,u1,..." and one row per step (t is 1-based).
void write_drive_csv(std::ostream& out, const Drive& drive);

}  // namespace esn
