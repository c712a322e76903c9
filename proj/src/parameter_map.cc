#include "battctrl/parameter_map.h"

#include <cmath>

#include "battctrl/error.h"

namespace battctrl {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kNonpositiveTimeConstant: return "NonpositiveTimeConstant";
    case ErrorCode::kNonFiniteBracket: return "NonFiniteBracket";
    case ErrorCode::kDegenerateCv: return "DegenerateCv";
    case ErrorCode::kNotAControllabilityParameter:
      return "NotAControllabilityParameter";
    case ErrorCode::kCountExceedsPopulation: return "CountExceedsPopulation";
    case ErrorCode::kMixedGrids: return "MixedGrids";
    case ErrorCode::kOddPopulation: return "OddPopulation";
    case ErrorCode::kEmptyDesignSet: return "EmptyDesignSet";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kSchemaError: return "SchemaError";
    case ErrorCode::kValidationError: return "ValidationError";
    case ErrorCode::kGenerationFailed: return "GenerationFailed";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

std::string_view UnitName(Unit unit) {
  switch (unit) {
    case Unit::kSeconds: return "s";
    case Unit::kFarads: return "F";
    case Unit::kOhms: return "ohm";
    case Unit::kVolts: return "V";
  }
  return "?";
}

ParameterMap::ParameterMap(std::vector<double> coefficients, Unit unit)
    : coefficients_(std::move(coefficients)), unit_(unit) {
  if (coefficients_.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "parameter map needs at least one coefficient");
  }
  for (double c : coefficients_) {
    if (!std::isfinite(c)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "parameter map coefficient is not finite");
    }
  }
}

double ParameterMap::Evaluate(double soc) const {
  // Horner, highest degree first.
  double result = coefficients_.back();
  for (auto it = coefficients_.rbegin() + 1; it != coefficients_.rend(); ++it) {
    result = result * soc + *it;
  }
  return result;
}

double ParameterMap::Derivative(double soc) const {
  const int n = static_cast<int>(coefficients_.size());
  if (n == 1) return 0.0;
  double result = (n - 1) * coefficients_[n - 1];
  for (int k = n - 2; k >= 1; --k) {
    result = result * soc + k * coefficients_[k];
  }
  return result;
}

ParameterMap ParameterMap::Scaled(double factor) const {
  std::vector<double> scaled = coefficients_;
  for (double& c : scaled) c *= factor;
  return ParameterMap(std::move(scaled), unit_);
}

}  // namespace battctrl
