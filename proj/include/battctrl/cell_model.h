#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "battctrl/parameter_map.h"

namespace battctrl {

/// One cell of the equivalent-circuit model: capacity, an OCV source, an
/// ohmic resistance and `n_rc` RC pairs. The state vector is
/// x = [soc, q_1, ..., q_n] so its dimension is n_rc + 1.
struct CellParameters {
  double capacity_coulombs = 0.0;
  std::vector<ParameterMap> tau_maps;  // seconds
  std::vector<ParameterMap> c_maps;    // farads
  ParameterMap r_map = ParameterMap::Constant(0.0, Unit::kOhms);
  ParameterMap ocv_map = ParameterMap::Constant(0.0, Unit::kVolts);
  std::string cell_id;
  std::string batch_id;

  int n_rc() const { return static_cast<int>(tau_maps.size()); }
  int state_dim() const { return n_rc() + 1; }

  bool operator==(const CellParameters&) const = default;
};

struct CellState {
  double soc = 0.0;
  std::vector<double> q;  // coulombs, one per RC pair

  static CellState Equilibrium(int n_rc, double soc) {
    return CellState{soc, std::vector<double>(n_rc, 0.0)};
  }

  Eigen::VectorXd ToVector() const;
  static CellState FromVector(const Eigen::VectorXd& x);

  bool operator==(const CellState&) const = default;
};

struct DynamicsEval {
  Eigen::VectorXd f;  // drift
  Eigen::VectorXd h;  // input direction
  double v = 0.0;     // terminal voltage at the given current

  Eigen::VectorXd StateDerivative(double current) const {
    return f + h * current;
  }
};

/// Evaluates the time constants at `soc`, throwing kNonpositiveTimeConstant if
/// any is not strictly positive.
std::vector<double> TimeConstantsAt(const CellParameters& params, double soc);

/// Drift f(x) = [0, -q_1/tau_1(soc), ..., -q_n/tau_n(soc)].
Eigen::VectorXd Drift(const CellParameters& params, const Eigen::VectorXd& x);

/// Input direction h = [1/Q, 1, ..., 1].
Eigen::VectorXd InputVector(const CellParameters& params);

/// OCV(soc) + sum q_i / C_i(soc) + R(soc) * current.
double TerminalVoltage(const CellParameters& params, const CellState& state,
                       double current);

DynamicsEval Dynamics(const CellParameters& params, const CellState& state,
                      double current);

struct Violation {
  enum class Kind {
    kNonpositiveCapacity,
    kNonpositiveTimeConstant,
    kNonpositiveCapacitance,
    kLengthMismatch,
    kDuplicateTimeConstantMap,
    kNonMonotoneOcv,
  };
  Kind kind;
  std::string message;
  bool warning_only = false;
};

/// Report-style validation over a 101-point SOC grid on [0, 1]. A non-monotone
/// OCV is reported as a warning only.
std::vector<Violation> ValidateCell(const CellParameters& params);

/// True if the report contains anything other than warnings.
bool HasErrors(const std::vector<Violation>& report);

}  // namespace battctrl
