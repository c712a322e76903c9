#include "battctrl/lie_ctrb.h"

#include <cfloat>
#include <cmath>
#include <limits>

#include "battctrl/error.h"
#include "battctrl/parallel.h"
#include "battctrl/svd.h"

namespace battctrl {

namespace {

constexpr double kRelativeStep = 1e-6;
constexpr double kAbsoluteStepFloor = 1e-9;

Eigen::MatrixXd DriftJacobianAt(const CellParameters& params,
                                const Eigen::VectorXd& x) {
  const double soc = x(0);
  const std::vector<double> taus = TimeConstantsAt(params, soc);
  const int n = params.state_dim();
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < params.n_rc(); ++i) {
    const double tau = taus[i];
    const double dtau = params.tau_maps[i].Derivative(soc);
    jac(i + 1, 0) = x(i + 1) * dtau / (tau * tau);
    jac(i + 1, i + 1) = -1.0 / tau;
  }
  return jac;
}

// ad_f^order h evaluated at x.
Eigen::VectorXd Bracket(const CellParameters& params, const Eigen::VectorXd& x,
                        int order) {
  if (order == 0) return InputVector(params);

  const Eigen::VectorXd previous = Bracket(params, x, order - 1);
  const Eigen::Index n = x.size();
  Eigen::MatrixXd previous_jac(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double step = std::max(kRelativeStep * std::abs(x(j)), kAbsoluteStepFloor);
    Eigen::VectorXd plus = x;
    Eigen::VectorXd minus = x;
    plus(j) += step;
    minus(j) -= step;
    previous_jac.col(j) = (Bracket(params, plus, order - 1) -
                           Bracket(params, minus, order - 1)) /
                          (plus(j) - minus(j));
  }
  return previous_jac * Drift(params, x) - DriftJacobianAt(params, x) * previous;
}

}  // namespace

Eigen::MatrixXd DriftJacobian(const CellParameters& params,
                              const CellState& state) {
  return DriftJacobianAt(params, state.ToVector());
}

std::vector<Eigen::VectorXd> LieBracketSequence(const CellParameters& params,
                                                const CellState& state,
                                                int max_order) {
  if (max_order < 0) {
    throw Error(ErrorCode::kInvalidArgument, "max_order must be >= 0");
  }
  if (static_cast<int>(state.q.size()) != params.n_rc()) {
    throw Error(ErrorCode::kInvalidArgument,
                "state dimension does not match the cell");
  }
  const Eigen::VectorXd x = state.ToVector();
  // Validates the time constants even when only order 0 is requested.
  TimeConstantsAt(params, state.soc);

  std::vector<Eigen::VectorXd> brackets;
  brackets.reserve(max_order + 1);
  for (int k = 0; k <= max_order; ++k) {
    Eigen::VectorXd ad = Bracket(params, x, k);
    if (!ad.allFinite()) {
      throw Error(ErrorCode::kNonFiniteBracket,
                  "bracket of order " + std::to_string(k) + " for cell '" +
                      params.cell_id + "' is not finite");
    }
    brackets.push_back(std::move(ad));
  }
  return brackets;
}

CtrbMatrix ControllabilityMatrix(const CellParameters& params,
                                 const CellState& state) {
  const int n = params.state_dim();
  const auto brackets = LieBracketSequence(params, state, n - 1);
  CtrbMatrix ctrb{Eigen::MatrixXd(n, n), state};
  for (int k = 0; k < n; ++k) ctrb.entries.col(k) = brackets[k];
  return ctrb;
}

CtrbMatrix EquilibriumCtrb(const CellParameters& params, double soc) {
  const int n = params.state_dim();
  const std::vector<double> taus = TimeConstantsAt(params, soc);
  CtrbMatrix ctrb{Eigen::MatrixXd::Zero(n, n),
                  CellState::Equilibrium(params.n_rc(), soc)};
  ctrb.entries(0, 0) = 1.0 / params.capacity_coulombs;
  for (int i = 0; i < params.n_rc(); ++i) {
    const double rate = 1.0 / taus[i];
    double power = 1.0;
    for (int k = 0; k < n; ++k) {
      ctrb.entries(i + 1, k) = power;
      power *= rate;
    }
  }
  return ctrb;
}

int Rank(const Eigen::MatrixXd& matrix, double relative_tolerance) {
  const Eigen::VectorXd sigma = SingularValues(matrix);
  if (sigma.size() == 0 || sigma(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index k = 0; k < sigma.size(); ++k) {
    if (sigma(k) > relative_tolerance * sigma(0)) ++rank;
  }
  return rank;
}

double ConditionNumber(const Eigen::MatrixXd& matrix) {
  const Eigen::VectorXd sigma = SingularValues(matrix);
  const double largest = sigma(0);
  const double smallest = sigma(sigma.size() - 1);
  if (!(smallest > DBL_EPSILON * largest)) {
    return std::numeric_limits<double>::infinity();
  }
  return largest / smallest;
}

double TwoStateEigs::Kappa() const { return std::sqrt(lam_hi / lam_lo); }

TwoStateEigs TwoStateEigenvalues(double capacity_coulombs, double tau_seconds) {
  const double q = capacity_coulombs;
  const double t = tau_seconds;
  const double q2 = q * q;
  const double t2 = t * t;
  const double base = q2 * t2 + q2 + t2;
  const double root = std::sqrt((base - 2.0 * q * t) * (base + 2.0 * q * t));

  TwoStateEigs eigs{};
  const double mid = 1.0 / (2.0 * q2) + 1.0 / (2.0 * t2) + 0.5;
  const double half_gap = root / (2.0 * q2 * t2);
  eigs.lam_hi = mid + half_gap;
  // Product of the pair is det(Co)^2 = 1/(Q^2 tau^2); dividing avoids the
  // cancellation in mid - half_gap.
  eigs.lam_lo = 1.0 / (q2 * t2 * eigs.lam_hi);

  eigs.lam_inv_hi = root / 2.0 + base / 2.0;
  eigs.lam_inv_lo = q2 * t2 / eigs.lam_inv_hi;
  return eigs;
}

Eigen::Matrix2d TwoStateCtrb(double capacity_coulombs, double tau_seconds) {
  Eigen::Matrix2d m;
  m << 1.0 / capacity_coulombs, 0.0, 1.0, 1.0 / tau_seconds;
  return m;
}

std::vector<double> SocGrid(double min, double max, double step) {
  if (!(step > 0.0) || !(max >= min) || !std::isfinite(min) ||
      !std::isfinite(max)) {
    throw Error(ErrorCode::kInvalidArgument,
                "SOC grid needs step > 0 and max >= min");
  }
  const auto count = static_cast<std::size_t>(std::floor((max - min) / step + 1e-9)) + 1;
  std::vector<double> grid(count);
  for (std::size_t k = 0; k < count; ++k) grid[k] = min + step * double(k);
  return grid;
}

std::vector<double> DefaultSocGrid() { return SocGrid(0.05, 0.95, 0.01); }

ConditionProfile KappaProfile(const CellParameters& params,
                              const std::vector<double>& soc_grid) {
  for (std::size_t k = 0; k < soc_grid.size(); ++k) {
    if (soc_grid[k] < 0.0 || soc_grid[k] > 1.0 ||
        (k > 0 && !(soc_grid[k] > soc_grid[k - 1]))) {
      throw Error(ErrorCode::kInvalidArgument,
                  "SOC grid must be strictly increasing within [0, 1]");
    }
  }
  ConditionProfile profile{params.cell_id, params.batch_id, soc_grid, {}};
  profile.kappa.reserve(soc_grid.size());
  for (double soc : soc_grid) {
    profile.kappa.push_back(ConditionNumber(EquilibriumCtrb(params, soc).entries));
  }
  return profile;
}

std::vector<ConditionProfile> KappaProfiles(
    const std::vector<CellParameters>& cells,
    const std::vector<double>& soc_grid) {
  return ParallelMap(cells.size(), [&](std::size_t i) {
    return KappaProfile(cells[i], soc_grid);
  });
}

}  // namespace battctrl
