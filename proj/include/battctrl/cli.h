#pragma once

#include <ostream>

namespace battctrl {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 1;
inline constexpr int kExitUsageError = 2;

/// Entry point of the `battctrl` tool. Returns 0 on success, 1 on data errors
/// (unreadable or invalid inputs) and 2 on usage errors.
int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace battctrl
