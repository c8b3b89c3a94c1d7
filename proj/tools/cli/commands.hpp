#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "config.hpp"

namespace zpf::cli {

/// Runs one subcommand, writing its files under cfg.out. Returns the summary document.
/// Warnings go to `warn`.
nlohmann::json run_command(const RunConfig& cfg, std::ostream& warn);

/// Full command-line entry. args excludes the program name.
/// Exit codes: 0 ok, 1 validation or I/O error, 2 numerical convergence failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace zpf::cli
