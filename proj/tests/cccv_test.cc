#include "doctest.h"

#include "battctrl/cccv.h"
#include "battctrl/error.h"
#include "battctrl/lie_ctrb.h"
#include "test_support.h"

namespace battctrl {
namespace {

TEST_CASE("euler step") {
  const CellParameters a = TwoStateScenarioCell(10.0, "A");
  const CellState eq = CellState::Equilibrium(1, 0.3);
  CHECK(EulerStep(a, eq, 0.0, 1.0) == eq);

  const CellState next = EulerStep(a, CellState::Equilibrium(1, 0.0), 1.0, 1.0);
  CHECK(next.soc == doctest::Approx(2.3148148148148148e-4).epsilon(1e-12));
  CHECK(next.q[0] == doctest::Approx(1.0).epsilon(1e-15));

  CHECK_THROWS_AS(EulerStep(a, eq, 1.0, 0.0), Error);
}

// Current I such that one Euler step of length dt lands on v_limit, found by
// bisection. As dt -> 0 this is the zero-voltage-derivative hold current.
double BisectHoldCurrent(const CellParameters& cell, const CellState& state, double v_limit,
                         double dt) {
  double lo = -10.0, hi = 10.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double v = TerminalVoltage(cell, EulerStep(cell, state, mid, dt), mid);
    (v > v_limit ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

TEST_CASE("cv current, zero-resistance branch") {
  const CellParameters a = TwoStateScenarioCell(10.0, "A");
  // V = 3 + 0.5 soc + q/5000 = 3.5 with q = 10 C.
  const CellState at_limit{(0.5 - 10.0 / 5000.0) / 0.5, {10.0}};
  CHECK(TerminalVoltage(a, at_limit, 0.0) == doctest::Approx(3.5).epsilon(1e-14));

  const double current = CvCurrent(a, at_limit, 3.5);
  CHECK(current == doctest::Approx(0.6334).epsilon(1e-4));
  CHECK(current == doctest::Approx(BisectHoldCurrent(a, at_limit, 3.5, 0.1)).epsilon(1e-9));

  CHECK(CvCurrent(a, CellState{0.9, {0.0}}, 3.5) == 0.0);

  CellParameters flat = a;
  flat.ocv_map = ParameterMap({3.0, -30.0}, Unit::kVolts);  // OCV'/Q + 1/C < 0
  try {
    CvCurrent(flat, at_limit, 3.5);
    FAIL("expected DegenerateCv");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDegenerateCv);
  }
}

TEST_CASE("cv current, algebraic branch") {
  CellParameters cell = TwoStateScenarioCell(10.0, "R");
  cell.r_map = ParameterMap::Constant(0.01, Unit::kOhms);
  cell.ocv_map = ParameterMap::Constant(3.49, Unit::kVolts);
  CHECK(CvCurrent(cell, CellState{0.5, {0.0}}, 3.5) == doctest::Approx(1.0).epsilon(1e-12));
  // Floored at zero above the limit.
  CHECK(CvCurrent(cell, CellState{0.5, {0.0}}, 3.4) == 0.0);
}

TEST_CASE("protocol validation") {
  CccvProtocol p;
  CHECK_NOTHROW(p.Validate());
  p.i_cc = 0.005;
  CHECK_THROWS_AS(p.Validate(), Error);
  p = CccvProtocol{};
  p.dt = -0.1;
  CHECK_THROWS_AS(p.Validate(), Error);
}

TEST_CASE("scenario cells") {
  const CccvProtocol protocol;
  const auto results =
      RunCccv({TwoStateScenarioCell(10.0, "A"), TwoStateScenarioCell(200.0, "B")}, protocol,
              {CellState::Equilibrium(1, 0.0), CellState::Equilibrium(1, 0.0)});
  REQUIRE(results.size() == 2);
  for (const auto& r : results) {
    REQUIRE(r.terminated_by == Termination::kCompleted);
    CHECK(r.t_cv_start <= r.t_complete);
    // Charge accounting: both sides integrate the same discrete current series,
    // up to summation rounding over ~5e4 steps.
    CHECK(4320.0 * (r.soc_end - r.soc_start) ==
          doctest::Approx(r.charge_delivered).epsilon(1e-9));
    CHECK(r.max_cv_voltage_error <= 1e-3);

    for (std::size_t i = 1; i < r.trajectory.size(); ++i) {
      CHECK(r.trajectory[i].t > r.trajectory[i - 1].t);
    }
    // Constant current before the CV phase.
    for (const auto& s : r.trajectory) {
      if (s.t < r.t_cv_start) CHECK(s.current == protocol.i_cc);
    }
    CHECK(r.trajectory.back().t == r.t_complete);
    CHECK(r.trajectory.back().current < protocol.i_cutoff);
  }
  const SimResult& a = results[0];
  const SimResult& b = results[1];
  CHECK(a.t_complete < b.t_complete);
  CHECK(b.t_cv_start < a.t_cv_start);
  CHECK(a.t_complete == doctest::Approx(4382.0).epsilon(0.15));
  CHECK(b.t_complete == doctest::Approx(5566.0).epsilon(0.15));
}

TEST_CASE("halving dt changes completion time by under half a percent") {
  CccvProtocol coarse;
  CccvProtocol fine;
  fine.dt = coarse.dt / 2;
  for (double tau : {10.0, 200.0}) {
    const CellParameters cell = TwoStateScenarioCell(tau, "c");
    const double t1 = SimulateCccv(cell, coarse, CellState::Equilibrium(1, 0.0)).t_complete;
    const double t2 = SimulateCccv(cell, fine, CellState::Equilibrium(1, 0.0)).t_complete;
    CHECK(std::abs(t1 - t2) / t2 < 0.005);
  }
}

TEST_CASE("effort grows with time constant and condition number") {
  double previous_t = 0.0;
  double previous_kappa = 0.0;
  for (double tau : {10.0, 50.0, 100.0, 200.0}) {
    const CellParameters cell = TwoStateScenarioCell(tau, "c");
    const SimResult r = SimulateCccv(cell, CccvProtocol{}, CellState::Equilibrium(1, 0.0));
    const double kappa = ConditionNumber(EquilibriumCtrb(cell, 0.0).entries);
    CHECK(r.t_complete > previous_t);
    CHECK(kappa > previous_kappa);
    previous_t = r.t_complete;
    previous_kappa = kappa;
  }
}

TEST_CASE("time limit and faults are per cell") {
  CccvProtocol short_run;
  short_run.t_max = 100.0;
  const SimResult capped =
      SimulateCccv(TwoStateScenarioCell(10.0, "A"), short_run, CellState::Equilibrium(1, 0.0));
  CHECK(capped.terminated_by == Termination::kTimeLimit);
  CHECK(capped.t_complete < 0.0);

  CellParameters broken = TwoStateScenarioCell(10.0, "broken");
  broken.tau_maps[0] = ParameterMap({10.0, -20.0}, Unit::kSeconds);  // negative past soc 0.5
  const auto results = RunCccv({broken, TwoStateScenarioCell(10.0, "A")}, CccvProtocol{},
                               {CellState::Equilibrium(1, 0.0), CellState::Equilibrium(1, 0.0)});
  CHECK(results[0].terminated_by == Termination::kFault);
  CHECK_FALSE(results[0].fault.empty());
  CHECK(results[1].terminated_by == Termination::kCompleted);
}

TEST_CASE("resistive cell holds the voltage limit exactly in CV") {
  CellParameters cell = TwoStateScenarioCell(30.0, "R");
  cell.r_map = ParameterMap::Constant(0.05, Unit::kOhms);
  const SimResult r = SimulateCccv(cell, CccvProtocol{}, CellState::Equilibrium(1, 0.0));
  REQUIRE(r.terminated_by == Termination::kCompleted);
  CHECK(r.max_cv_voltage_error < 1e-12);
}

}  // namespace
}  // namespace battctrl
