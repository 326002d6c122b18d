// Command-line front end: track, reduce, centrality, whatif, serve, convert.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace urbanet::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;  // usage, missing file or parse error
inline constexpr int kExitPois = 2;   // invalid or duplicate POIs, bad edits

/// Runs one command; args excludes the program name. Tables go to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace urbanet::cli
