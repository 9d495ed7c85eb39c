#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sldiff {

/**
 * Run the command-line interface on pre-split arguments (no program name).
 * Results go to `out`, a machine-readable error object to `err`.
 *
 * Exit status: 0 success, 1 validation/parse error, 2 numerical failure,
 * 3 domain-guard violation.
 */
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sldiff
