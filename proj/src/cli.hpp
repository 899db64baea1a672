#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sectorium::cli {

/// Runs one subcommand. The JSON report goes to `out`, diagnostics to `err`.
/// Returns 0 when every check passes, 1 when a check fails and 2 on input
/// errors (malformed files, invalid groups or irreps, unknown subcommands).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sectorium::cli
