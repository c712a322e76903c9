#include "doctest.h"

#include "battctrl/cccv.h"
#include "battctrl/cell_model.h"
#include "battctrl/error.h"
#include "test_support.h"

namespace battctrl {
namespace {

CellParameters OneRcCell(double q, ParameterMap tau, double c = 5000.0) {
  CellParameters cell;
  cell.capacity_coulombs = q;
  cell.tau_maps = {std::move(tau)};
  cell.c_maps = {ParameterMap::Constant(c, Unit::kFarads)};
  cell.r_map = ParameterMap::Constant(0.0, Unit::kOhms);
  cell.ocv_map = ParameterMap({3.0, 0.5}, Unit::kVolts);
  cell.cell_id = "test";
  return cell;
}

TEST_CASE("parameter map evaluation") {
  CHECK(ParameterMap({3.0, 0.5}, Unit::kVolts).Evaluate(0.5) == 3.25);
  CHECK(ParameterMap::Constant(10.0, Unit::kSeconds).Evaluate(0.37) == 10.0);
  CHECK(ParameterMap({1.0, -2.0, 1.0}, Unit::kOhms).Evaluate(1.0) == 0.0);
  // No clamping outside [0, 1].
  CHECK(ParameterMap({3.0, 0.5}, Unit::kVolts).Evaluate(2.0) == 4.0);
}

TEST_CASE("parameter map derivative") {
  CHECK(ParameterMap({3.0, 0.5}, Unit::kVolts).Derivative(0.2) == 0.5);
  CHECK(ParameterMap::Constant(10.0, Unit::kSeconds).Derivative(0.7) == 0.0);

  const ParameterMap square({0.0, 0.0, 2.0}, Unit::kSeconds);
  CHECK(square.Derivative(0.25) == doctest::Approx(1.0).epsilon(1e-15));
  const double h = 1e-6 * 0.25;
  const double fd = (square.Evaluate(0.25 + h) - square.Evaluate(0.25 - h)) / (2 * h);
  CHECK(std::abs(fd - 1.0) < 1e-8);
}

TEST_CASE("parameter map rejects empty or non-finite coefficients") {
  CHECK_THROWS_AS(ParameterMap({}, Unit::kVolts), Error);
  CHECK_THROWS_AS(ParameterMap({1.0, NAN}, Unit::kVolts), Error);
}

TEST_CASE("derivative matches central differences on random polynomials") {
  SeededRng rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const int degree = static_cast<int>(rng.Below(7));
    std::vector<double> coeffs(degree + 1);
    for (double& c : coeffs) c = rng.Uniform(-10.0, 10.0);
    const ParameterMap map(coeffs, Unit::kOhms);
    const double soc = rng.Uniform(0.05, 0.95);
    const double h = 1e-6 * soc;
    const double fd = (map.Evaluate(soc + h) - map.Evaluate(soc - h)) / (2 * h);
    const double exact = map.Derivative(soc);
    // Relative 1e-6 with an absolute floor for derivatives near zero.
    CHECK(std::abs(fd - exact) <= 1e-6 * std::max(1.0, std::abs(exact)));
  }
}

TEST_CASE("dynamics of the two-state scenario cell") {
  const CellParameters cell = TwoStateScenarioCell(10.0, "A");
  for (double soc : {0.0, 0.4, 0.9}) {
    const DynamicsEval eval = Dynamics(cell, CellState{soc, {0.0}}, 0.0);
    CHECK(eval.f(0) == 0.0);
    CHECK(eval.f(1) == 0.0);
    CHECK(eval.h(0) == doctest::Approx(1.0 / 4320.0).epsilon(1e-15));
    CHECK(eval.h(1) == 1.0);
    CHECK(eval.StateDerivative(0.0).isZero(0.0));
  }

  // q1 = tau * I is the CC steady state of the RC pair.
  const DynamicsEval eval = Dynamics(cell, CellState{0.0, {10.0}}, 1.0);
  CHECK(eval.v == doctest::Approx(3.002).epsilon(1e-15));
  const Eigen::VectorXd xdot = eval.StateDerivative(1.0);
  CHECK(xdot(0) == doctest::Approx(2.3148148148148148e-4).epsilon(1e-12));
  CHECK(xdot(1) == doctest::Approx(0.0));
}

TEST_CASE("nonpositive time constant is reported") {
  const CellParameters cell = OneRcCell(4320.0, ParameterMap({1.0, -2.0}, Unit::kSeconds));
  CHECK_NOTHROW(Dynamics(cell, CellState{0.2, {0.0}}, 0.0));
  try {
    Dynamics(cell, CellState{0.6, {0.0}}, 0.0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNonpositiveTimeConstant);
  }
}

TEST_CASE("dynamics properties on random cells") {
  SeededRng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const int n_rc = 1 + static_cast<int>(rng.Below(3));
    CellParameters cell = testing::RandomCell(rng, n_rc);
    cell.r_map = ParameterMap({0.02, -0.005}, Unit::kOhms);
    CellState state{rng.Uniform(0.0, 1.0), {}};
    for (int i = 0; i < n_rc; ++i) state.q.push_back(rng.Uniform(-50.0, 50.0));
    const double a = rng.Uniform(-5.0, 5.0);
    const double b = rng.Uniform(-5.0, 5.0);

    const DynamicsEval eval = Dynamics(cell, state, a);
    CHECK(eval.f(0) == 0.0);
    for (int i = 1; i <= n_rc; ++i) CHECK(eval.h(i) == 1.0);

    // Control-affine structure.
    const Eigen::VectorXd lhs =
        eval.StateDerivative(a) + eval.StateDerivative(b) - eval.StateDerivative(0.0);
    const Eigen::VectorXd rhs = eval.StateDerivative(a + b);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-14 * (1.0 + rhs.cwiseAbs().maxCoeff()));

    // Voltage superposition over the relaxation charges.
    double expected = 0.0;
    for (int i = 0; i < n_rc; ++i) expected += state.q[i] / cell.c_maps[i].Evaluate(state.soc);
    const double v0 = TerminalVoltage(cell, CellState::Equilibrium(n_rc, state.soc), a);
    CHECK(eval.v - v0 == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("cell validation") {
  CHECK(ValidateCell(TwoStateScenarioCell(10.0, "A")).empty());

  CellParameters bad = TwoStateScenarioCell(10.0, "A");
  bad.capacity_coulombs = -1.0;
  auto report = ValidateCell(bad);
  REQUIRE(report.size() == 1);
  CHECK(report[0].kind == Violation::Kind::kNonpositiveCapacity);
  CHECK(HasErrors(report));

  CellParameters dup = TwoStateScenarioCell(10.0, "A");
  dup.tau_maps.push_back(dup.tau_maps[0]);
  dup.c_maps.push_back(dup.c_maps[0]);
  report = ValidateCell(dup);
  REQUIRE(report.size() == 1);
  CHECK(report[0].kind == Violation::Kind::kDuplicateTimeConstantMap);

  CellParameters mismatch = TwoStateScenarioCell(10.0, "A");
  mismatch.c_maps.clear();
  report = ValidateCell(mismatch);
  REQUIRE(!report.empty());
  CHECK(report[0].kind == Violation::Kind::kLengthMismatch);

  CellParameters negative_c = TwoStateScenarioCell(10.0, "A");
  negative_c.c_maps[0] = ParameterMap({100.0, -200.0}, Unit::kFarads);
  report = ValidateCell(negative_c);
  REQUIRE(report.size() == 1);
  CHECK(report[0].kind == Violation::Kind::kNonpositiveCapacitance);

  CellParameters dip = TwoStateScenarioCell(10.0, "A");
  dip.ocv_map = ParameterMap({3.3, -0.2, 0.4}, Unit::kVolts);
  report = ValidateCell(dip);
  REQUIRE(report.size() == 1);
  CHECK(report[0].kind == Violation::Kind::kNonMonotoneOcv);
  CHECK(report[0].warning_only);
  CHECK_FALSE(HasErrors(report));
}

}  // namespace
}  // namespace battctrl
