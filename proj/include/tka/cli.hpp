#ifndef TKA_CLI_HPP
#define TKA_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace tka::cli {

// Dispatches one invocation. Returns 0 on success, 1 on domain errors
// (machine-readable error JSON on `err`), 2 on usage errors.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace tka::cli

#endif
