#pragma once

#include <span>
#include <string_view>
#include <vector>

namespace battctrl {

enum class Unit { kSeconds, kFarads, kOhms, kVolts };

std::string_view UnitName(Unit unit);

/// A polynomial in state of charge holding one SOC-dependent ECM parameter
/// (a time constant, an RC capacitance, the ohmic resistance or the OCV).
/// Coefficients are stored in ascending degree. Evaluation never clamps the
/// SOC argument.
class ParameterMap {
 public:
  /// Throws kInvalidArgument if `coefficients` is empty or holds a non-finite
  /// value.
  ParameterMap(std::vector<double> coefficients, Unit unit);

  static ParameterMap Constant(double value, Unit unit) {
    return ParameterMap({value}, unit);
  }

  double Evaluate(double soc) const;
  double Derivative(double soc) const;

  /// Copy with every coefficient multiplied by `factor`.
  ParameterMap Scaled(double factor) const;

  std::span<const double> coefficients() const { return coefficients_; }
  int degree() const { return static_cast<int>(coefficients_.size()) - 1; }
  Unit unit() const { return unit_; }

  bool operator==(const ParameterMap&) const = default;

 private:
  std::vector<double> coefficients_;
  Unit unit_;
};

}  // namespace battctrl
