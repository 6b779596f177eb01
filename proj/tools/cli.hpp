#pragma once

#include <ostream>

namespace glvr::cli {

// Exit codes: 0 success, 1 I/O or internal failure, 2 usage/config, 3 domain.
enum ExitCode : int { kOk = 0, kIoFailure = 1, kUsage = 2, kDomain = 3 };

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace glvr::cli
