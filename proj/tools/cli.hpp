#pragma once

#include <iostream>
#include <string>
#include <vector>

namespace syncauto {

// Dispatches one subcommand (gen, analyze, decide, reset, enumerate,
// experiment). JSON results go to `out`, diagnostics to `err`; input is read
// from --in or from `in`. Exit codes: 0 success, 1 domain error, 2 usage
// error.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err);

}  // namespace syncauto
