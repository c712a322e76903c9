#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "battctrl/cell_model.h"

namespace battctrl {

struct CccvProtocol {
  double i_cc = 1.0;       // A
  double v_limit = 3.5;    // V
  double i_cutoff = 0.01;  // A
  double dt = 0.1;         // s
  double t_max = 50000.0;  // s

  /// Throws kInvalidArgument unless i_cc > i_cutoff > 0, dt > 0, t_max > 0.
  void Validate() const;
};

enum class Termination { kCompleted, kTimeLimit, kFault };

std::string_view TerminationName(Termination termination);

struct TrajectorySample {
  double t;
  double current;
  double soc;
  double v;
};

struct SimResult {
  std::string cell_id;
  Termination terminated_by = Termination::kFault;
  double t_cv_start = -1.0;  // negative if CV was never reached
  double t_complete = -1.0;  // negative unless completed
  double charge_delivered = 0.0;  // sum of I_k * dt, coulombs
  double soc_start = 0.0;
  double soc_end = 0.0;
  double max_cv_voltage_error = 0.0;  // max |v - v_limit| over CV steps
  std::vector<TrajectorySample> trajectory;  // sampled every 1 s
  std::string fault;
};

/// Two-state cell with capacity 4320 C, one RC pair with constant time
/// constant `tau_seconds`, a 5000 F relaxation capacitance, zero resistance and
/// OCV = 3 + 0.5 soc. tau = 10 s is cell A, tau = 200 s is cell B.
CellParameters TwoStateScenarioCell(double tau_seconds, std::string cell_id);

/// x+ = x + dt (f(x) + h current).
CellState EulerStep(const CellParameters& params, const CellState& state,
                    double current, double dt);

/// Current that holds the terminal voltage at `v_limit`. With R(soc) > 0 this
/// is the algebraic solution of the voltage equation; with R(soc) = 0 it is the
/// current that makes dV/dt vanish. Floored at zero.
///
/// Throws kDegenerateCv when R = 0 and OCV'(soc)/Q + sum 1/C_i(soc) <= 0.
double CvCurrent(const CellParameters& params, const CellState& state,
                 double v_limit);

/// Constant current until the terminal voltage reaches `v_limit`, then
/// constant voltage until the hold current drops below `i_cutoff`.
SimResult SimulateCccv(const CellParameters& params,
                       const CccvProtocol& protocol, const CellState& initial);

/// Each cell is simulated independently. A fault in one cell is recorded in
/// its result and does not stop the others.
std::vector<SimResult> RunCccv(const std::vector<CellParameters>& cells,
                               const CccvProtocol& protocol,
                               const std::vector<CellState>& initial);

}  // namespace battctrl
