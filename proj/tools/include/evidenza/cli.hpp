#pragma once

#include <ostream>

namespace evidenza {

/// Entry point of the evidenza command-line tool.
/// Returns 0 on success, 2 on a usage error and 3 when an estimator fails at run time.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace evidenza
