#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace seqspec::cli {

/// Runs one command line (without the program name). Reports go to the -o file
/// or, without -o, to `out`; errors go to `err` as one JSON object per line.
/// Returns 0 on success, 1 for usage or parse errors, 2 for numerical failures
/// and 3 for precondition violations.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace seqspec::cli
