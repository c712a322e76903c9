#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace battctrl {

enum class ErrorCode {
  kInvalidArgument,
  kNonpositiveTimeConstant,
  kNonFiniteBracket,
  kDegenerateCv,
  kNotAControllabilityParameter,
  kCountExceedsPopulation,
  kMixedGrids,
  kOddPopulation,
  kEmptyDesignSet,
  kParseError,
  kSchemaError,
  kValidationError,
  kGenerationFailed,
  kIoError,
};

std::string_view ErrorCodeName(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so that
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace battctrl
