#include "battctrl/svd.h"

#include <algorithm>
#include <cmath>
#include <functional>

namespace battctrl {

namespace {
constexpr double kOrthogonalityTolerance = 1e-14;
constexpr int kMaxSweeps = 80;
}  // namespace

Eigen::VectorXd SingularValues(const Eigen::MatrixXd& matrix) {
  // Work on the orientation with at least as many rows as columns.
  Eigen::MatrixXd a =
      matrix.rows() >= matrix.cols() ? matrix : Eigen::MatrixXd(matrix.transpose());
  const Eigen::Index n = a.cols();

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (Eigen::Index i = 0; i < n - 1; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const double alpha = a.col(i).squaredNorm();
        const double beta = a.col(j).squaredNorm();
        const double gamma = a.col(i).dot(a.col(j));
        if (alpha == 0.0 || beta == 0.0 || gamma == 0.0) continue;
        const double coupling = std::abs(gamma) / std::sqrt(alpha * beta);
        off = std::max(off, coupling);
        if (coupling <= kOrthogonalityTolerance) continue;

        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        const Eigen::VectorXd ci = a.col(i);
        a.col(i) = c * ci - s * a.col(j);
        a.col(j) = s * ci + c * a.col(j);
      }
    }
    if (off <= kOrthogonalityTolerance) break;
  }

  Eigen::VectorXd sigma(n);
  for (Eigen::Index k = 0; k < n; ++k) sigma(k) = a.col(k).norm();
  std::sort(sigma.data(), sigma.data() + n, std::greater<>());
  return sigma;
}

}  // namespace battctrl
