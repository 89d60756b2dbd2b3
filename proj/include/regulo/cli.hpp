#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace regulo {

/// Exit codes: 0 every check verified, 1 a mathematical check was refuted
/// (the report carries a witness), 2 operational error.
inline constexpr int kExitVerified = 0;
inline constexpr int kExitRefuted = 1;
inline constexpr int kExitOperational = 2;

inline constexpr std::uint64_t kMinMemoryLimit = std::uint64_t{64} << 20;

/// Parses "1073741824", "512M", "4G", "4GiB", "2T" (binary multiples).
/// Returns nullopt on malformed input.
std::optional<std::uint64_t> parse_memory_size(const std::string& text);

/// Runs one subcommand. JSON goes to `out` unless --output names a file.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace regulo
