#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace heightlab {

/// Bumped on any change to the JSON schema of a subcommand.
inline constexpr int kFormatVersion = 1;

/// Runs one command line (args excludes the program name). JSON goes to out,
/// messages to err. Returns the process exit code: 0 on success, 2 on usage
/// or input errors, 1 on computational failure.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace heightlab
