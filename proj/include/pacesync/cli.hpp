#ifndef PACESYNC_CLI_HPP
#define PACESYNC_CLI_HPP

#include <string>
#include <vector>

namespace pacesync {

/// Command-line entry point. Subcommands: simulate, bounds, sweep, trap,
/// check. Returns 0 on success, 1 on config/usage errors, 2 when the
/// integrator aborts.
int cli_main(int argc, const char* const* argv);

/// Convenience overload for tests; `args` excludes the program name.
int cli_main(const std::vector<std::string>& args);

} // namespace pacesync

#endif
