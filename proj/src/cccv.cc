#include "battctrl/cccv.h"

#include <algorithm>
#include <cmath>

#include "battctrl/error.h"
#include "battctrl/parallel.h"

namespace battctrl {

namespace {
constexpr double kSampleInterval = 1.0;  // s
}  // namespace

void CccvProtocol::Validate() const {
  if (!(i_cutoff > 0.0) || !(i_cc > i_cutoff)) {
    throw Error(ErrorCode::kInvalidArgument,
                "CCCV protocol needs i_cc > i_cutoff > 0");
  }
  if (!(dt > 0.0) || !(t_max > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "CCCV protocol needs dt > 0 and t_max > 0");
  }
}

std::string_view TerminationName(Termination termination) {
  switch (termination) {
    case Termination::kCompleted: return "completed";
    case Termination::kTimeLimit: return "t_max";
    case Termination::kFault: return "fault";
  }
  return "?";
}

CellParameters TwoStateScenarioCell(double tau_seconds, std::string cell_id) {
  CellParameters cell;
  cell.capacity_coulombs = 4320.0;
  cell.tau_maps = {ParameterMap::Constant(tau_seconds, Unit::kSeconds)};
  cell.c_maps = {ParameterMap::Constant(5000.0, Unit::kFarads)};
  cell.r_map = ParameterMap::Constant(0.0, Unit::kOhms);
  cell.ocv_map = ParameterMap({3.0, 0.5}, Unit::kVolts);
  cell.cell_id = std::move(cell_id);
  cell.batch_id = "scenario";
  return cell;
}

CellState EulerStep(const CellParameters& params, const CellState& state,
                    double current, double dt) {
  if (!(dt > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "time step must be positive");
  }
  const DynamicsEval eval = Dynamics(params, state, current);
  return CellState::FromVector(state.ToVector() +
                               dt * eval.StateDerivative(current));
}

double CvCurrent(const CellParameters& params, const CellState& state,
                 double v_limit) {
  const double soc = state.soc;
  const double r = params.r_map.Evaluate(soc);
  double current;
  if (r > 0.0) {
    current = (v_limit - TerminalVoltage(params, state, 0.0)) / r;
  } else {
    const std::vector<double> taus = TimeConstantsAt(params, soc);
    double relaxation = 0.0;
    double denominator = params.ocv_map.Derivative(soc) / params.capacity_coulombs;
    for (int i = 0; i < params.n_rc(); ++i) {
      const double c = params.c_maps[i].Evaluate(soc);
      relaxation += state.q[i] / (taus[i] * c);
      denominator += 1.0 / c;
    }
    if (!(denominator > 0.0)) {
      throw Error(ErrorCode::kDegenerateCv,
                  "zero-resistance CV hold is ill-posed for cell '" +
                      params.cell_id + "' at soc " + std::to_string(soc));
    }
    current = relaxation / denominator;
  }
  return std::max(current, 0.0);
}

SimResult SimulateCccv(const CellParameters& params,
                       const CccvProtocol& protocol, const CellState& initial) {
  protocol.Validate();
  SimResult result;
  result.cell_id = params.cell_id;
  result.soc_start = initial.soc;
  result.soc_end = initial.soc;

  CellState state = initial;
  bool in_cv = false;
  double next_sample = 0.0;
  try {
    for (long step = 0;; ++step) {
      const double t = double(step) * protocol.dt;
      if (t >= protocol.t_max) {
        result.terminated_by = Termination::kTimeLimit;
        break;
      }
      if (!in_cv && TerminalVoltage(params, state, protocol.i_cc) >= protocol.v_limit) {
        in_cv = true;
        result.t_cv_start = t;
      }
      const double current =
          in_cv ? CvCurrent(params, state, protocol.v_limit) : protocol.i_cc;
      const double v = TerminalVoltage(params, state, current);
      if (in_cv) {
        result.max_cv_voltage_error =
            std::max(result.max_cv_voltage_error, std::abs(v - protocol.v_limit));
      }
      const bool done = in_cv && current < protocol.i_cutoff;
      if (t >= next_sample || done) {
        result.trajectory.push_back({t, current, state.soc, v});
        next_sample += kSampleInterval;
      }
      if (done) {
        result.terminated_by = Termination::kCompleted;
        result.t_complete = t;
        break;
      }
      state = EulerStep(params, state, current, protocol.dt);
      result.charge_delivered += current * protocol.dt;
      result.soc_end = state.soc;
    }
  } catch (const Error& e) {
    result.terminated_by = Termination::kFault;
    result.fault = e.what();
  }
  return result;
}

std::vector<SimResult> RunCccv(const std::vector<CellParameters>& cells,
                               const CccvProtocol& protocol,
                               const std::vector<CellState>& initial) {
  protocol.Validate();
  if (initial.size() != cells.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "one initial state per cell is required");
  }
  return ParallelMap(cells.size(), [&](std::size_t i) {
    return SimulateCccv(cells[i], protocol, initial[i]);
  });
}

}  // namespace battctrl
