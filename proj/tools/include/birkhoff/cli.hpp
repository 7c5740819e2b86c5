#pragma once

// birkhoff-lab command line front end. The entry point is a plain function so
// tests can drive it in-process with captured streams.
//
// Exit codes: 0 ok, 1 usage or configuration, 2 numeric or self-check
// failure, 3 verification failure.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace birkhoff::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumeric = 2;
inline constexpr int kExitVerifyFailed = 3;

/// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Writes `content` to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// Default worker count: BIRKHOFF_LAB_THREADS when set to a positive
/// integer, otherwise 4.
int default_workers();

std::string tool_version();

}  // namespace birkhoff::cli
