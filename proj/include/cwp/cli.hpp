#ifndef CWP_CLI_HPP
#define CWP_CLI_HPP

#include <iosfwd>

namespace cwp {

/// Runs one cwpcheck invocation. Returns 0 (no errors), 2 (error
/// findings) or 1 (usage, I/O or parse failure).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cwp

#endif  // CWP_CLI_HPP
