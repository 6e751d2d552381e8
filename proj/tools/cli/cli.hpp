#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dprir::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kIo = 2, kNumerical = 3 };

struct Streams {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

/// Runs one command line (args[0] is the program name). "-" in place of an
/// input or output path means stdin or stdout.
int run(const std::vector<std::string>& args, Streams io);

/// Per-method mean wall time and step count over run manifests, as CSV with
/// columns method,runs,mean_wall_time_s,mean_steps,ratio_to_dpr1.
std::string timing_report(const std::vector<std::string>& manifest_texts);

}  // namespace dprir::cli
