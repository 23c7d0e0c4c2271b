#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sgdavg::cli {

/// Exit codes: 0 success or PASS, 1 runtime/verification failure, 2 usage error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Entry point shared by the executable and the tests. `args` excludes argv[0].
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sgdavg::cli
