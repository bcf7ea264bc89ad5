#pragma once

#include <ostream>

namespace newsclust {

// Entry point behind the newsclust executable. Returns 0 on success, 1 on a
// usage error and 2 on a data error; diagnostics go to err.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace newsclust
