#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sha3fd::cli {

enum ExitCode : int {
  kOk = 0,
  kMismatch = 1,
  kBadArguments = 2,
  kMasked = 3,
  kBudget = 4,
};

/// Runs the command line `args` (args[0] is the program name) against the
/// given streams and returns the process exit code.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

struct ReferenceThroughput {
  const char* series;
  double freq_mhz;
  // Mbps indexed like kAllModes.
  double mbps[6];
};

/// Reported throughput per design at its maximum clock frequency.
const std::vector<ReferenceThroughput>& reference_throughput_table();

}  // namespace sha3fd::cli
