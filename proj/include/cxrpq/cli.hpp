#ifndef CXRPQ_CLI_HPP
#define CXRPQ_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace cxrpq {

// Runs the command line tool on the given arguments (program name excluded).
// Exit codes: 0 nonempty answer / MATCH, 1 empty answer / NO MATCH, 2 error.
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

} // namespace cxrpq

#endif
