#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sov::cli {

/// Exit codes.
enum Exit : int {
    ok = 0,
    acceptance_failure = 1,
    schema_error = 2,
    non_generic = 3,
    numeric_domain = 4,
    numerical_failure = 5,  // convergence or singular path
    internal_error = 6,
};

/// Runs sovctl with args[0] the program name; never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sov::cli
