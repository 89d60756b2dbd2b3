#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "regulo/poly_engine.hpp"

namespace regulo {

// Binary layout, little-endian throughout:
//   "RPUC" | version u32 | k u32 | m u32 | N u64
//   N+1 x (byte_length u32 | magnitude bytes, least significant first)
//   SHA-256 of everything above
inline constexpr std::array<char, 4> kCheckpointMagic{'R', 'P', 'U', 'C'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

void write_checkpoint(const DensePolynomial& p, std::ostream& out);
DensePolynomial read_checkpoint(std::istream& in);

/// Writes to a temporary sibling and renames, so a crash never leaves a
/// half-written file under `destination`.
void save_checkpoint(const DensePolynomial& p, const std::filesystem::path& destination);
DensePolynomial load_checkpoint(const std::filesystem::path& source);

/// Hex SHA-256 of the checkpoint header and body; equals the file's footer.
std::string polynomial_digest(const DensePolynomial& p);

}  // namespace regulo
