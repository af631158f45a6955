#pragma once

#include <string>

#include "nsk/config.hpp"

namespace nsk {

/// Executes one subcommand, writing its CSV artifacts and a manifest into
/// out_dir. Throws ConfigError / NumericsError / ConvergenceError; the CLI
/// maps those to exit codes 2 / 3 / 4.
void run_subcommand(const std::string& subcommand, RunConfig cfg,
                    const std::string& out_dir);

}  // namespace nsk
