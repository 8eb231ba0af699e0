#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace roofkit::cli {

/// Exit codes of the roofkit tool.
enum Exit : int {
  kOk = 0,
  kUsage = 1,  // also: a verify-paper row did not pass
  kInvalid = 2,
  kBudget = 3,
  kNegative = 4,
  kInconclusive = 5,
};

/// Runs `roofkit <args...>` (args excludes the program name). The report goes
/// to `out`; diagnostics and wall time go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace roofkit::cli
