#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace efs::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,  ///< a roundtrip check ran but missed its tolerance
  kConfigError = 2,
  kNumericalError = 3,
  kIoError = 4,
};

/// Runs the command line `args` (args[0] is the program name). Results go to
/// `out` as key=value lines; diagnostics go through efs::log.
int run(const std::vector<std::string>& args, std::ostream& out);

}  // namespace efs::cli
