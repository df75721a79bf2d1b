#ifndef RBQR_CLI_HPP
#define RBQR_CLI_HPP

#include <iosfwd>
#include <string>

#include "rbqr/config.hpp"

namespace rbqr::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNotReached = 1;
inline constexpr int kExitInputError = 2;

/// Full command line: `rbqr <subcommand> [--config PATH] [--set k=v]...
/// [--workers N] [--quiet]`. Returns the process exit code.
int run(int argc, char** argv);

/// Runs one subcommand with an already assembled configuration. Progress
/// lines go to `log` unless `quiet`.
int run_command(const std::string& subcommand, const Config& config, bool quiet, std::ostream& log);

}  // namespace rbqr::cli

#endif  // RBQR_CLI_HPP
