#ifndef APSL_CLI_HPP
#define APSL_CLI_HPP

// apsl rho | scan | green | bands
//
// Exit codes: 0 ok, 1 usage or input error, 2 horizon exceeded,
// 3 Weyl solution not decayed, 4 coefficients not periodic.

#include <ostream>

namespace apsl {

enum ExitCode : int {
  exit_ok = 0,
  exit_usage = 1,
  exit_horizon = 2,
  exit_not_decayed = 3,
  exit_not_periodic = 4,
};

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace apsl

#endif  // APSL_CLI_HPP
