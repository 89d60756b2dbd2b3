#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "regulo/poly_engine.hpp"

// Brute-force ground truth for d_{k,m}(n). Nothing here multiplies
// polynomials; counts come from subsets of the allowed part set.
namespace regulo::oracle {

/// Allowed parts {p : 1 <= p <= km+k-1, k does not divide p}, ascending.
struct PartSet {
  int k = 2;
  int m = 0;
  std::vector<std::uint64_t> parts;

  static PartSet make(long long k, long long m);
  std::uint64_t total() const noexcept;
};

/// Strictly decreasing parts.
struct Partition {
  std::vector<std::uint64_t> parts;

  std::uint64_t weight() const noexcept;
  friend bool operator==(const Partition&, const Partition&) = default;
};

enum class TableMode { dp, enumeration };

inline constexpr std::uint64_t kDpCap = 200'000;
inline constexpr std::uint64_t kEnumerationCap = 2'000;
inline constexpr std::size_t kDefaultEnumerateCap = 100'000;

/// d_{k,m}(n); zero outside [0, N].
Coefficient count(long long k, long long m, long long n);

/// All qualifying partitions, largest part first, in reverse lexicographic
/// order. Throws output-cap-exceeded when more than `cap` exist.
std::vector<Partition> enumerate(long long k, long long m, long long n,
                                 std::size_t cap = kDefaultEnumerateCap);

/// table[n] = d_{k,m}(n) for 0 <= n <= N.
/// dp: subset-sum table over the parts, N <= 200,000.
/// enumeration: every subset visited explicitly, N <= 2,000.
std::vector<Coefficient> count_table(long long k, long long m, TableMode mode = TableMode::dp);

}  // namespace regulo::oracle
