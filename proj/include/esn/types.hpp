#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <stdexcept>
#include <string>

namespace esn {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Time-major matrix: one row per time step, one column per node/channel.
using StateMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Recoverable runtime failure (degenerate draws, singular systems, bad input data).
/// Contract violations (mismatched dimensions, out-of-range arguments) throw
/// std::invalid_argument instead.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Reservoir states of one run after washout.
struct Trajectory {
    StateMatrix states;          ///< (T - washout) x N
    std::size_t first_step = 0;  ///< drive index that produced row 0

    Index length() const { return states.rows(); }
    Index width() const { return states.cols(); }
};

}  // namespace esn
