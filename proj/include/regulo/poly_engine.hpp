#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace regulo {

/// Exact partition count. Unbounded; D_{10,252} has coefficients above 2^2270.
using Coefficient = boost::multiprecision::cpp_int;

inline constexpr std::uint64_t kDefaultMemoryLimit = std::uint64_t{4} << 30;

/// Returns k(k-1)(m+1)^2/2. Throws invalid-parameter for k < 2 or m < 0.
std::uint64_t total_degree(long long k, long long m);

struct PolyParams {
  int k = 2;
  int m = 0;
  std::uint64_t N = 1;

  /// Validates k >= 2, m >= 0 and fills in N.
  static PolyParams make(long long k, long long m);

  /// Number of binomial factors (1 + q^e) in the product.
  std::uint64_t factor_count() const noexcept {
    return static_cast<std::uint64_t>(k - 1) * static_cast<std::uint64_t>(m + 1);
  }

  friend bool operator==(const PolyParams&, const PolyParams&) = default;
};

/// One factor (1 + q^exponent).
struct BinomialFactor {
  std::uint64_t exponent = 1;

  friend bool operator==(const BinomialFactor&, const BinomialFactor&) = default;
};

/// Exponents kj+l for j in [m_first, m_last], l in [1, k-1], in ascending order.
std::vector<BinomialFactor> factor_schedule(int k, int m_first, int m_last);

/// Dense array of nonnegative integers stored as fixed-stride little-endian
/// 64-bit limbs. The stride is chosen from a running upper bound on the bit
/// length of every entry and widened before any operation that could carry out
/// of the top limb, so arithmetic never overflows.
class CoefficientArray {
 public:
  CoefficientArray() = default;
  /// Zero-filled array of `length` entries.
  explicit CoefficientArray(std::size_t length, std::size_t limbs_per_entry = 1);

  static CoefficientArray from_values(std::span<const Coefficient> values);
  static CoefficientArray from_u64(std::span<const std::uint64_t> values);
  /// Adopts `length` entries of `stride` little-endian limbs each.
  static CoefficientArray from_raw(std::vector<std::uint64_t> limbs, std::size_t length,
                                   std::size_t stride);

  std::size_t size() const noexcept { return length_; }
  bool empty() const noexcept { return length_ == 0; }
  std::size_t stride() const noexcept { return stride_; }
  /// Every entry is strictly below 2^bit_bound().
  std::size_t bit_bound() const noexcept { return bit_bound_; }
  std::size_t storage_bytes() const noexcept { return limbs_.size() * sizeof(std::uint64_t); }

  static std::size_t limbs_for_bits(std::size_t bits) noexcept {
    return bits == 0 ? 1 : (bits + 63) / 64;
  }
  static std::uint64_t storage_bytes_for(std::uint64_t length, std::size_t bits) noexcept {
    return length * limbs_for_bits(bits) * sizeof(std::uint64_t);
  }

  std::span<const std::uint64_t> entry(std::size_t n) const noexcept {
    return {limbs_.data() + n * stride_, stride_};
  }
  std::span<const std::uint64_t> raw_limbs() const noexcept { return limbs_; }

  Coefficient value(std::size_t n) const;
  std::vector<Coefficient> values() const;
  bool is_zero(std::size_t n) const noexcept;

  /// Three-way comparison of entries a and b.
  std::strong_ordering compare(std::size_t a, std::size_t b) const noexcept;
  /// Compares entry n here with entry j of `other` by value.
  std::strong_ordering compare_with(std::size_t n, const CoefficientArray& other,
                                    std::size_t j) const noexcept;

  Coefficient sum() const;

  /// Zero-extends or truncates to `length` entries.
  void resize(std::size_t length);
  /// Widens the stride so that entries of `bits` bits fit. Never narrows.
  void reserve_bits(std::size_t bits);

  /// In-place convolution with (1 + q^e) over the current length:
  /// a[n] <- a[n] + a[n-e] for n = size()-1 down to e. Entries pushed past
  /// the end are dropped, so callers resize first. With threads > 1 the index
  /// range is split into contiguous chunks; each chunk snapshots the e entries
  /// below its start before any chunk writes, which keeps the result identical
  /// to the sequential descending sweep.
  void multiply_binomial(std::uint64_t e, unsigned threads = 1);

  /// Value equality, independent of stride.
  friend bool operator==(const CoefficientArray& lhs, const CoefficientArray& rhs) noexcept;

 private:
  std::uint64_t* entry_ptr(std::size_t n) noexcept { return limbs_.data() + n * stride_; }
  const std::uint64_t* entry_ptr(std::size_t n) const noexcept {
    return limbs_.data() + n * stride_;
  }
  void restride(std::size_t new_stride);
  void sweep(std::size_t lo, std::size_t hi, std::uint64_t e, std::size_t live_end,
             const std::uint64_t* halo, std::size_t halo_begin);

  std::vector<std::uint64_t> limbs_;
  std::size_t length_ = 0;
  std::size_t stride_ = 1;
  std::size_t bit_bound_ = 0;
  // Entries at index >= live_end_ are known to be zero.
  std::size_t live_end_ = 0;
};

/// Coefficients of D_{k,m}(q) = prod_{j=0..m} prod_{l=1..k-1} (1 + q^{kj+l}).
/// Completed polynomials are immutable.
class DensePolynomial {
 public:
  DensePolynomial(PolyParams params, CoefficientArray coeffs);

  const PolyParams& params() const noexcept { return params_; }
  const CoefficientArray& coeffs() const noexcept { return coeffs_; }
  std::uint64_t degree() const noexcept { return params_.N; }
  Coefficient operator[](std::uint64_t n) const { return coeffs_.value(n); }

  /// Moves the storage out; used by extend() to avoid copying large arrays.
  CoefficientArray release() && { return std::move(coeffs_); }

  friend bool operator==(const DensePolynomial&, const DensePolynomial&) = default;

 private:
  PolyParams params_;
  CoefficientArray coeffs_;
};

struct BuildOptions {
  unsigned threads = 1;
  std::uint64_t memory_limit_bytes = kDefaultMemoryLimit;
};

/// Bytes of coefficient storage needed for D_{k,m}.
std::uint64_t required_storage_bytes(const PolyParams& params);

DensePolynomial build(long long k, long long m, const BuildOptions& options = {});

/// Builds D_{k,m} applying the factors in the given order; `order` must be a
/// permutation of factor_schedule(k, 0, m).
DensePolynomial build_with_order(const PolyParams& params, std::span<const BinomialFactor> order,
                                 const BuildOptions& options = {});

/// D_{k,m} from D_{k,m-1} by applying (1+q^{km+1})...(1+q^{km+k-1}).
DensePolynomial extend(const DensePolynomial& previous, const BuildOptions& options = {});
DensePolynomial extend(DensePolynomial&& previous, const BuildOptions& options = {});

}  // namespace regulo
