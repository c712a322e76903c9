#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "battctrl/cell_model.h"

namespace battctrl {

/// Nonlinear controllability matrix [h, ad_f h, ..., ad_f^{N-1} h] of one cell
/// evaluated at a state. Column k holds the k-th iterated Lie bracket.
struct CtrbMatrix {
  Eigen::MatrixXd entries;
  CellState eval_state;

  double eval_soc() const { return eval_state.soc; }
  int dim() const { return static_cast<int>(entries.rows()); }
};

/// Jacobian of the drift with respect to the state. Row 0 is zero; row i holds
/// q_i tau_i'/tau_i^2 in column 0 and -1/tau_i on the diagonal.
Eigen::MatrixXd DriftJacobian(const CellParameters& params,
                              const CellState& state);

/// Brackets ad_f^0 h ... ad_f^{max_order} h at `state`, computed with the
/// recursion ad^{k+1} = J(ad^k) f - J(f) ad^k. J(ad^k) comes from central
/// finite differences of the order-k bracket over the state (relative step
/// 1e-6, absolute floor 1e-9); J(f) is DriftJacobian.
///
/// Throws kNonpositiveTimeConstant, or kNonFiniteBracket if any entry is not
/// finite.
std::vector<Eigen::VectorXd> LieBracketSequence(const CellParameters& params,
                                                const CellState& state,
                                                int max_order);

CtrbMatrix ControllabilityMatrix(const CellParameters& params,
                                 const CellState& state);

/// Closed form at q = 0: row 0 = [1/Q, 0, ...], row i = powers of 1/tau_i(soc).
CtrbMatrix EquilibriumCtrb(const CellParameters& params, double soc);

inline constexpr double kDefaultRankTolerance = 1e-12;

/// Number of singular values above `relative_tolerance` times the largest.
int Rank(const Eigen::MatrixXd& matrix,
         double relative_tolerance = kDefaultRankTolerance);

/// sigma_max / sigma_min. Returns +infinity when sigma_min is zero to working
/// precision (sigma_min <= eps * sigma_max).
double ConditionNumber(const Eigen::MatrixXd& matrix);

/// Eigenvalues of Co^T Co and of Co^-T Co^-1 for the two-state matrix
/// [[1/Q, 0], [1, 1/tau]], in closed form.
struct TwoStateEigs {
  double lam_hi;
  double lam_lo;
  double lam_inv_hi;
  double lam_inv_lo;

  double Kappa() const;
};

TwoStateEigs TwoStateEigenvalues(double capacity_coulombs, double tau_seconds);

/// The two-state equilibrium matrix [[1/Q, 0], [1, 1/tau]].
Eigen::Matrix2d TwoStateCtrb(double capacity_coulombs, double tau_seconds);

struct ConditionProfile {
  std::string cell_id;
  std::string batch_id;
  std::vector<double> soc_grid;
  std::vector<double> kappa;
};

/// min, min + step, ... up to max inclusive (within 1e-9 of a step). Throws
/// kInvalidArgument on a non-positive step or max < min.
std::vector<double> SocGrid(double min, double max, double step);

/// 0.05 to 0.95 in steps of 0.01 (91 points).
std::vector<double> DefaultSocGrid();

/// Equilibrium condition number at each grid point. The grid must be strictly
/// increasing and lie within [0, 1].
ConditionProfile KappaProfile(const CellParameters& params,
                              const std::vector<double>& soc_grid);

std::vector<ConditionProfile> KappaProfiles(
    const std::vector<CellParameters>& cells,
    const std::vector<double>& soc_grid);

}  // namespace battctrl
