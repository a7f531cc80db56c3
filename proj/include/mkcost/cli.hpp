#pragma once

#include <ostream>

namespace mkcost {

/// Command-line front end. Returns 0 on success, 1 on a domain error and 2
/// on a usage error; diagnostics go to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mkcost
