#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dqm::cli {

// Runs the command line (args excludes the program name). Data goes to out,
// usage errors to err. Exit codes: 0 success, 1 numerical failure or failed
// check (structured JSON error on out), 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in);

}  // namespace dqm::cli
