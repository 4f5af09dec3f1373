#pragma once

#include <iosfwd>

namespace slk::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitRuntime = 2;

/// Entry point of the command-line tool. Subcommands: run, spectrum, ensemble,
/// validate-config, list-presets. Returns 0 on success, 1 on a configuration
/// error (the message names the field), 2 on a runtime failure.
int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace slk::cli
