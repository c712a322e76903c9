#pragma once

#include <Eigen/Core>

namespace battctrl {

/// Singular values of a small dense matrix, largest first, computed by
/// one-sided (Hestenes) Jacobi orthogonalization of the columns. Sweeps stop
/// once every column pair satisfies |<a_i, a_j>| <= 1e-14 * |a_i| |a_j|.
Eigen::VectorXd SingularValues(const Eigen::MatrixXd& matrix);

}  // namespace battctrl
