#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gridcap::cli {

enum ExitCode : int {
    kOk = 0,
    kValidation = 1,
    kInfeasible = 2,
    kInternal = 3,
};

/// Subcommands: validate, plan, dispatch, report, compare, export-mps.
/// Summaries go to `out`, diagnostics to `err`, results to files under --out.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_command(int argc, char** argv);

} // namespace gridcap::cli
