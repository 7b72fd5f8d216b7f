#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace specount::cli {

/// Dispatches the command line (without argv[0]) and streams results.
/// Exit status: 0 success, 1 usage or parse error, 2 non-converged result
/// under --strict, 3 inequality failure in verify-lemma.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace specount::cli
