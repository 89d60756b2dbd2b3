#include "regulo/poly_engine.hpp"

#include <algorithm>
#include <bit>
#include <iterator>
#include <string>
#include <thread>

#include "regulo/error.hpp"

#if defined(__x86_64__)
#include <x86intrin.h>
#endif

namespace regulo {

namespace {

inline unsigned char add_carry(unsigned char carry, std::uint64_t a, std::uint64_t b,
                               std::uint64_t* out) noexcept {
#if defined(__x86_64__)
  unsigned long long r;
  carry = _addcarry_u64(carry, a, b, &r);
  *out = r;
  return carry;
#else
  unsigned __int128 s = static_cast<unsigned __int128>(a) + b + carry;
  *out = static_cast<std::uint64_t>(s);
  return static_cast<unsigned char>(s >> 64);
#endif
}

template <std::size_t L>
inline void add_fixed(std::uint64_t* dst, const std::uint64_t* src) noexcept {
  unsigned char c = 0;
  for (std::size_t i = 0; i < L; ++i) c = add_carry(c, dst[i], src[i], dst + i);
}

inline void add_n(std::uint64_t* dst, const std::uint64_t* src, std::size_t limbs) noexcept {
  unsigned char c = 0;
  for (std::size_t i = 0; i < limbs; ++i) c = add_carry(c, dst[i], src[i], dst + i);
}

// Descending sweep over [lo, hi): dst[n] += src(n - e). Sources below `halo_end`
// come from the snapshot `halo`, which starts at index `halo_begin`.
template <std::size_t L>
void sweep_fixed(std::uint64_t* base, std::size_t lo, std::size_t hi, std::uint64_t e,
                 std::size_t copy_from, const std::uint64_t* halo, std::size_t halo_begin,
                 std::size_t halo_end) {
  for (std::size_t n = hi; n-- > lo;) {
    const std::size_t s = n - e;
    const std::uint64_t* src =
        (halo != nullptr && s < halo_end) ? halo + (s - halo_begin) * L : base + s * L;
    std::uint64_t* dst = base + n * L;
    if (n >= copy_from) {
      std::copy_n(src, L, dst);
    } else {
      add_fixed<L>(dst, src);
    }
  }
}

void sweep_generic(std::uint64_t* base, std::size_t stride, std::size_t lo, std::size_t hi,
                   std::uint64_t e, std::size_t copy_from, const std::uint64_t* halo,
                   std::size_t halo_begin, std::size_t halo_end) {
  for (std::size_t n = hi; n-- > lo;) {
    const std::size_t s = n - e;
    const std::uint64_t* src = (halo != nullptr && s < halo_end)
                                   ? halo + (s - halo_begin) * stride
                                   : base + s * stride;
    std::uint64_t* dst = base + n * stride;
    if (n >= copy_from) {
      std::copy_n(src, stride, dst);
    } else {
      add_n(dst, src, stride);
    }
  }
}

// Chunks smaller than this are not worth a thread.
constexpr std::size_t kMinParallelEntries = 1 << 14;

}  // namespace

std::uint64_t total_degree(long long k, long long m) {
  if (k < 2) throw Error(ErrorKind::invalid_parameter, "k must be >= 2, got " + std::to_string(k));
  if (m < 0) throw Error(ErrorKind::invalid_parameter, "m must be >= 0, got " + std::to_string(m));
  if (k > (1 << 20) || m > (1 << 24)) {
    throw Error(ErrorKind::invalid_parameter, "k or m out of supported range");
  }
  const auto uk = static_cast<std::uint64_t>(k);
  const auto um = static_cast<std::uint64_t>(m) + 1;
  return uk * (uk - 1) / 2 * um * um;
}

PolyParams PolyParams::make(long long k, long long m) {
  const std::uint64_t n = total_degree(k, m);
  return PolyParams{static_cast<int>(k), static_cast<int>(m), n};
}

std::vector<BinomialFactor> factor_schedule(int k, int m_first, int m_last) {
  std::vector<BinomialFactor> out;
  if (m_last < m_first) return out;
  out.reserve(static_cast<std::size_t>(k - 1) * static_cast<std::size_t>(m_last - m_first + 1));
  for (int j = m_first; j <= m_last; ++j) {
    for (int l = 1; l < k; ++l) {
      out.push_back({static_cast<std::uint64_t>(k) * static_cast<std::uint64_t>(j) +
                     static_cast<std::uint64_t>(l)});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// CoefficientArray

CoefficientArray::CoefficientArray(std::size_t length, std::size_t limbs_per_entry)
    : limbs_(length * std::max<std::size_t>(limbs_per_entry, 1), 0),
      length_(length),
      stride_(std::max<std::size_t>(limbs_per_entry, 1)) {}

CoefficientArray CoefficientArray::from_values(std::span<const Coefficient> values) {
  std::size_t bits = 0;
  for (const auto& v : values) {
    if (v < 0) throw Error(ErrorKind::invalid_parameter, "coefficients must be nonnegative");
    if (v != 0) bits = std::max<std::size_t>(bits, boost::multiprecision::msb(v) + 1);
  }
  CoefficientArray out(values.size(), limbs_for_bits(bits));
  for (std::size_t n = 0; n < values.size(); ++n) {
    std::vector<std::uint64_t> limbs;
    if (values[n] != 0) {
      boost::multiprecision::export_bits(values[n], std::back_inserter(limbs), 64, false);
    }
    std::copy(limbs.begin(), limbs.end(), out.entry_ptr(n));
    if (values[n] != 0) out.live_end_ = n + 1;
  }
  out.bit_bound_ = bits;
  return out;
}

CoefficientArray CoefficientArray::from_u64(std::span<const std::uint64_t> values) {
  CoefficientArray out(values.size(), 1);
  std::size_t bits = 0;
  for (std::size_t n = 0; n < values.size(); ++n) {
    out.limbs_[n] = values[n];
    if (values[n] != 0) {
      out.live_end_ = n + 1;
      bits = std::max<std::size_t>(bits, std::bit_width(values[n]));
    }
  }
  out.bit_bound_ = bits;
  return out;
}

CoefficientArray CoefficientArray::from_raw(std::vector<std::uint64_t> limbs, std::size_t length,
                                            std::size_t stride) {
  if (stride == 0 || limbs.size() != length * stride) {
    throw Error(ErrorKind::invalid_parameter, "raw limb buffer does not match length x stride");
  }
  CoefficientArray out;
  out.limbs_ = std::move(limbs);
  out.length_ = length;
  out.stride_ = stride;
  for (std::size_t n = 0; n < length; ++n) {
    const std::uint64_t* p = out.entry_ptr(n);
    for (std::size_t i = stride; i-- > 0;) {
      if (p[i] != 0) {
        out.bit_bound_ = std::max<std::size_t>(out.bit_bound_, 64 * i + std::bit_width(p[i]));
        out.live_end_ = n + 1;
        break;
      }
    }
  }
  return out;
}

Coefficient CoefficientArray::value(std::size_t n) const {
  Coefficient out;
  const std::uint64_t* p = entry_ptr(n);
  boost::multiprecision::import_bits(out, p, p + stride_, 64, false);
  return out;
}

std::vector<Coefficient> CoefficientArray::values() const {
  std::vector<Coefficient> out;
  out.reserve(length_);
  for (std::size_t n = 0; n < length_; ++n) out.push_back(value(n));
  return out;
}

bool CoefficientArray::is_zero(std::size_t n) const noexcept {
  const std::uint64_t* p = entry_ptr(n);
  return std::all_of(p, p + stride_, [](std::uint64_t x) { return x == 0; });
}

std::strong_ordering CoefficientArray::compare(std::size_t a, std::size_t b) const noexcept {
  const std::uint64_t* pa = entry_ptr(a);
  const std::uint64_t* pb = entry_ptr(b);
  for (std::size_t i = stride_; i-- > 0;) {
    if (pa[i] != pb[i]) return pa[i] <=> pb[i];
  }
  return std::strong_ordering::equal;
}

std::strong_ordering CoefficientArray::compare_with(std::size_t n, const CoefficientArray& other,
                                                    std::size_t j) const noexcept {
  const std::uint64_t* pa = entry_ptr(n);
  const std::uint64_t* pb = other.entry_ptr(j);
  const std::size_t width = std::max(stride_, other.stride_);
  for (std::size_t i = width; i-- > 0;) {
    const std::uint64_t x = i < stride_ ? pa[i] : 0;
    const std::uint64_t y = i < other.stride_ ? pb[i] : 0;
    if (x != y) return x <=> y;
  }
  return std::strong_ordering::equal;
}

bool operator==(const CoefficientArray& lhs, const CoefficientArray& rhs) noexcept {
  if (lhs.length_ != rhs.length_) return false;
  if (lhs.stride_ == rhs.stride_) return lhs.limbs_ == rhs.limbs_;
  for (std::size_t n = 0; n < lhs.length_; ++n) {
    if (lhs.compare_with(n, rhs, n) != 0) return false;
  }
  return true;
}

Coefficient CoefficientArray::sum() const {
  std::vector<unsigned __int128> columns(stride_, 0);
  for (std::size_t n = 0; n < length_; ++n) {
    const std::uint64_t* p = entry_ptr(n);
    for (std::size_t i = 0; i < stride_; ++i) columns[i] += p[i];
  }
  Coefficient total = 0;
  for (std::size_t i = stride_; i-- > 0;) {
    Coefficient hi = static_cast<std::uint64_t>(columns[i] >> 64);
    Coefficient lo = static_cast<std::uint64_t>(columns[i]);
    total += ((hi << 64) + lo) << (64 * i);
  }
  return total;
}

void CoefficientArray::resize(std::size_t length) {
  limbs_.resize(length * stride_, 0);
  length_ = length;
  live_end_ = std::min(live_end_, length);
}

void CoefficientArray::reserve_bits(std::size_t bits) {
  const std::size_t needed = limbs_for_bits(bits);
  if (needed > stride_) restride(needed);
}

void CoefficientArray::restride(std::size_t new_stride) {
  std::vector<std::uint64_t> next(length_ * new_stride, 0);
  const std::size_t keep = std::min(stride_, new_stride);
  for (std::size_t n = 0; n < length_; ++n) {
    std::copy_n(entry_ptr(n), keep, next.data() + n * new_stride);
  }
  limbs_ = std::move(next);
  stride_ = new_stride;
}

void CoefficientArray::sweep(std::size_t lo, std::size_t hi, std::uint64_t e,
                             std::size_t live_end, const std::uint64_t* halo,
                             std::size_t halo_begin) {
  // `lo` doubles as the end of the halo: sources below the chunk start are
  // read from the snapshot.
  const std::size_t halo_end = lo;
  std::uint64_t* base = limbs_.data();
  switch (stride_) {
#define REGULO_SWEEP_CASE(L) \
  case L: return sweep_fixed<L>(base, lo, hi, e, live_end, halo, halo_begin, halo_end);
    REGULO_SWEEP_CASE(1)
    REGULO_SWEEP_CASE(2)
    REGULO_SWEEP_CASE(3)
    REGULO_SWEEP_CASE(4)
    REGULO_SWEEP_CASE(5)
    REGULO_SWEEP_CASE(6)
    REGULO_SWEEP_CASE(7)
    REGULO_SWEEP_CASE(8)
    REGULO_SWEEP_CASE(10)
    REGULO_SWEEP_CASE(12)
    REGULO_SWEEP_CASE(16)
    REGULO_SWEEP_CASE(20)
    REGULO_SWEEP_CASE(24)
    REGULO_SWEEP_CASE(28)
    REGULO_SWEEP_CASE(32)
    REGULO_SWEEP_CASE(36)
#undef REGULO_SWEEP_CASE
    default:
      return sweep_generic(base, stride_, lo, hi, e, live_end, halo, halo_begin, halo_end);
  }
}

void CoefficientArray::multiply_binomial(std::uint64_t e, unsigned threads) {
  if (e == 0) throw Error(ErrorKind::invalid_parameter, "binomial exponent must be >= 1");
  if (live_end_ == 0 || e >= length_) return;

  if (bit_bound_ + 1 > 64 * stride_) restride(stride_ + 1);

  const std::size_t old_live = live_end_;
  const std::size_t new_live = static_cast<std::size_t>(
      std::min<std::uint64_t>(length_, static_cast<std::uint64_t>(old_live) + e));
  const std::size_t lo = static_cast<std::size_t>(e);
  const std::size_t span = new_live > lo ? new_live - lo : 0;

  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(threads, span / kMinParallelEntries));

  if (workers <= 1) {
    sweep(lo, new_live, e, old_live, nullptr, 0);
  } else {
    std::vector<std::size_t> bounds(workers + 1);
    for (std::size_t t = 0; t <= workers; ++t) bounds[t] = lo + span * t / workers;

    // Snapshot the (pre-update) entries each chunk reads from below its start.
    std::vector<std::vector<std::uint64_t>> halos(workers);
    std::vector<std::size_t> halo_begin(workers, 0);
    for (std::size_t t = 1; t < workers; ++t) {
      const std::size_t start = bounds[t];
      const std::size_t begin = start - lo;  // chunks start at or above lo == e
      halo_begin[t] = begin;
      halos[t].assign(entry_ptr(begin), entry_ptr(begin) + (start - begin) * stride_);
    }

    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t t = 1; t < workers; ++t) {
      pool.emplace_back([&, t] {
        sweep(bounds[t], bounds[t + 1], e, old_live, halos[t].data(), halo_begin[t]);
      });
    }
    sweep(bounds[0], bounds[1], e, old_live, nullptr, 0);
  }

  live_end_ = new_live;
  if (bit_bound_ > 0) ++bit_bound_;
}

// ---------------------------------------------------------------------------
// DensePolynomial

DensePolynomial::DensePolynomial(PolyParams params, CoefficientArray coeffs)
    : params_(params), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != params_.N + 1) {
    throw Error(ErrorKind::invalid_parameter,
                "coefficient array length " + std::to_string(coeffs_.size()) +
                    " does not match N+1 = " + std::to_string(params_.N + 1));
  }
}

std::uint64_t required_storage_bytes(const PolyParams& params) {
  return CoefficientArray::storage_bytes_for(params.N + 1,
                                             static_cast<std::size_t>(params.factor_count()) + 1);
}

namespace {

void enforce_ceiling(const PolyParams& params, const BuildOptions& options) {
  const std::uint64_t need = required_storage_bytes(params);
  if (need > options.memory_limit_bytes) {
    throw Error(ErrorKind::memory_ceiling_exceeded,
                "D_{" + std::to_string(params.k) + "," + std::to_string(params.m) + "} needs " +
                    std::to_string(need) + " bytes, limit is " +
                    std::to_string(options.memory_limit_bytes) +
                    "; shard the run or resume from a checkpoint");
  }
}

}  // namespace

DensePolynomial build_with_order(const PolyParams& params, std::span<const BinomialFactor> order,
                                 const BuildOptions& options) {
  enforce_ceiling(params, options);
  std::vector<BinomialFactor> sorted(order.begin(), order.end());
  std::sort(sorted.begin(), sorted.end(),
            [](BinomialFactor a, BinomialFactor b) { return a.exponent < b.exponent; });
  if (sorted != factor_schedule(params.k, 0, params.m)) {
    throw Error(ErrorKind::invalid_parameter, "factor order is not a permutation of the schedule");
  }
  const std::uint64_t one = 1;
  auto coeffs = CoefficientArray::from_u64(std::span(&one, 1));
  coeffs.reserve_bits(static_cast<std::size_t>(params.factor_count()) + 1);
  coeffs.resize(params.N + 1);
  for (const auto& f : order) coeffs.multiply_binomial(f.exponent, options.threads);
  return DensePolynomial(params, std::move(coeffs));
}

DensePolynomial build(long long k, long long m, const BuildOptions& options) {
  const PolyParams params = PolyParams::make(k, m);
  const auto schedule = factor_schedule(params.k, 0, params.m);
  return build_with_order(params, schedule, options);
}

DensePolynomial extend(DensePolynomial&& previous, const BuildOptions& options) {
  const PolyParams next = PolyParams::make(previous.params().k, previous.params().m + 1);
  enforce_ceiling(next, options);
  CoefficientArray coeffs = std::move(previous).release();
  coeffs.reserve_bits(static_cast<std::size_t>(next.factor_count()) + 1);
  coeffs.resize(next.N + 1);
  for (const auto& f : factor_schedule(next.k, next.m, next.m)) {
    coeffs.multiply_binomial(f.exponent, options.threads);
  }
  return DensePolynomial(next, std::move(coeffs));
}

DensePolynomial extend(const DensePolynomial& previous, const BuildOptions& options) {
  DensePolynomial copy = previous;
  return extend(std::move(copy), options);
}

}  // namespace regulo
