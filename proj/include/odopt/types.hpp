#pragma once

#include <Eigen/Dense>

namespace odopt {

/// Dense row-major matrix. Communication matrices, backward products and
/// per-agent stacks (one agent per row) all use this layout.
using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

}  // namespace odopt
