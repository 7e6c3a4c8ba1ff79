#pragma once

#include <string>

#include "movavg/report.hpp"

namespace movavg {

// Executes one experiment command with a resolved configuration; writes the
// JSON report (plus CSV tables) into the output directory and prints a one
// line summary. Returns the process exit code: 0 success, 2 invariant
// violated, 3 configuration error.
int run_command(const std::string& command, const Config& cfg);

// Named angles accepted anywhere an exact scalar is expected.
ExactScalar parse_theta(const std::string& text);

} // namespace movavg
