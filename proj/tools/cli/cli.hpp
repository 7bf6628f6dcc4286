#pragma once

#include <iosfwd>

namespace cauchy_est::cli {

/// Exit codes: 0 success, 1 usage or input error, 2 some simulation cell failed.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitPartialFailure = 2;

/// Entry point of the cauchy-est tool with injectable streams.
int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace cauchy_est::cli
