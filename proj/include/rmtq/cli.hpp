#pragma once

#include <ostream>

namespace rmtq {

/// Parses arguments, runs one subcommand and writes the report.
/// Returns 0 on success, 2 on a configuration error, 3 on numerical failure.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace rmtq
