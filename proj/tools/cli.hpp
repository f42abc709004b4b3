#pragma once

#include <ostream>

namespace rotormesh::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kInput = 2,
  kDeformFailure = 3,
  kInterfaceFailure = 4,
};

/// Entry point of the `rotormesh` tool, with output streams injectable.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rotormesh::cli
