#include "battctrl/cell_model.h"

#include <algorithm>
#include <cmath>

#include "battctrl/error.h"

namespace battctrl {

Eigen::VectorXd CellState::ToVector() const {
  Eigen::VectorXd x(q.size() + 1);
  x(0) = soc;
  for (std::size_t i = 0; i < q.size(); ++i) x(i + 1) = q[i];
  return x;
}

CellState CellState::FromVector(const Eigen::VectorXd& x) {
  CellState state;
  state.soc = x(0);
  state.q.assign(x.data() + 1, x.data() + x.size());
  return state;
}

std::vector<double> TimeConstantsAt(const CellParameters& params, double soc) {
  std::vector<double> taus;
  taus.reserve(params.tau_maps.size());
  for (std::size_t i = 0; i < params.tau_maps.size(); ++i) {
    const double tau = params.tau_maps[i].Evaluate(soc);
    if (!(tau > 0.0)) {
      throw Error(ErrorCode::kNonpositiveTimeConstant,
                  "tau_" + std::to_string(i + 1) + " = " + std::to_string(tau) +
                      " at soc " + std::to_string(soc) + " for cell '" +
                      params.cell_id + "'");
    }
    taus.push_back(tau);
  }
  return taus;
}

Eigen::VectorXd Drift(const CellParameters& params, const Eigen::VectorXd& x) {
  const std::vector<double> taus = TimeConstantsAt(params, x(0));
  Eigen::VectorXd f = Eigen::VectorXd::Zero(params.state_dim());
  for (int i = 0; i < params.n_rc(); ++i) f(i + 1) = -x(i + 1) / taus[i];
  return f;
}

Eigen::VectorXd InputVector(const CellParameters& params) {
  Eigen::VectorXd h = Eigen::VectorXd::Ones(params.state_dim());
  h(0) = 1.0 / params.capacity_coulombs;
  return h;
}

double TerminalVoltage(const CellParameters& params, const CellState& state,
                       double current) {
  double v = params.ocv_map.Evaluate(state.soc);
  for (int i = 0; i < params.n_rc(); ++i) {
    v += state.q[i] / params.c_maps[i].Evaluate(state.soc);
  }
  return v + params.r_map.Evaluate(state.soc) * current;
}

DynamicsEval Dynamics(const CellParameters& params, const CellState& state,
                      double current) {
  if (static_cast<int>(state.q.size()) != params.n_rc()) {
    throw Error(ErrorCode::kInvalidArgument,
                "state has " + std::to_string(state.q.size()) +
                    " relaxation charges, cell has " +
                    std::to_string(params.n_rc()) + " RC pairs");
  }
  DynamicsEval eval;
  eval.f = Drift(params, state.ToVector());
  eval.h = InputVector(params);
  eval.v = TerminalVoltage(params, state, current);
  return eval;
}

std::vector<Violation> ValidateCell(const CellParameters& params) {
  using Kind = Violation::Kind;
  std::vector<Violation> report;
  if (!(params.capacity_coulombs > 0.0)) {
    report.push_back({Kind::kNonpositiveCapacity,
                      "capacity " + std::to_string(params.capacity_coulombs) +
                          " C is not positive"});
  }
  if (params.n_rc() < 1 || params.c_maps.size() != params.tau_maps.size()) {
    report.push_back({Kind::kLengthMismatch,
                      "expected n_rc >= 1 with one C map per tau map, got " +
                          std::to_string(params.tau_maps.size()) + " tau and " +
                          std::to_string(params.c_maps.size()) + " C maps"});
  }

  constexpr int kGridPoints = 101;
  auto check_positive = [&](const std::vector<ParameterMap>& maps, Kind kind,
                            const char* name) {
    for (std::size_t i = 0; i < maps.size(); ++i) {
      for (int k = 0; k < kGridPoints; ++k) {
        const double soc = k / double(kGridPoints - 1);
        const double value = maps[i].Evaluate(soc);
        if (!(value > 0.0)) {
          report.push_back({kind, std::string(name) + "_" +
                                      std::to_string(i + 1) +
                                      " is not positive at soc " +
                                      std::to_string(soc)});
          break;
        }
      }
    }
  };
  check_positive(params.tau_maps, Kind::kNonpositiveTimeConstant, "tau");
  check_positive(params.c_maps, Kind::kNonpositiveCapacitance, "C");

  for (std::size_t i = 0; i < params.tau_maps.size(); ++i) {
    for (std::size_t j = i + 1; j < params.tau_maps.size(); ++j) {
      if (params.tau_maps[i] == params.tau_maps[j]) {
        report.push_back({Kind::kDuplicateTimeConstantMap,
                          "tau_" + std::to_string(i + 1) + " and tau_" +
                              std::to_string(j + 1) + " are identical"});
      }
    }
  }

  double previous = params.ocv_map.Evaluate(0.0);
  for (int k = 1; k < kGridPoints; ++k) {
    const double current = params.ocv_map.Evaluate(k / double(kGridPoints - 1));
    if (current < previous) {
      report.push_back({Kind::kNonMonotoneOcv,
                        "OCV decreases near soc " +
                            std::to_string(k / double(kGridPoints - 1)),
                        /*warning_only=*/true});
      break;
    }
    previous = current;
  }
  return report;
}

bool HasErrors(const std::vector<Violation>& report) {
  return std::any_of(report.begin(), report.end(),
                     [](const Violation& v) { return !v.warning_only; });
}

}  // namespace battctrl
