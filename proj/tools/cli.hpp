#pragma once
// Command-line front end. Kept as a library so tests can drive it in-process.

#include <iosfwd>
#include <string>
#include <vector>

namespace dxg::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kIoOrParse = 2,
  kCorruptSnapshot = 3,
  kNoEligible = 4,
  kChecksumMismatch = 5,
};

// `args` excludes the program name. Data goes to files; summaries, warnings
// and errors go to `err` as "dxg: key=value ..." lines.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dxg::cli
