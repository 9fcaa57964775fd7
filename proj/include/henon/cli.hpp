#pragma once
#include <string>
#include <vector>

namespace henon {

// Front end for the subcommands
//   classify, green, periodic, manifold, reparam, gallery, selftest.
// Exit codes: 0 success, 1 usage error, 2 domain error (one JSON record per
// error on stderr).
int cli_main(int argc, const char* const* argv);

// convenience for tests
int cli_main(const std::vector<std::string>& args);

}  // namespace henon
