#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "regulo/poly_engine.hpp"

namespace regulo {

/// A position where d(n) >= d(n-1) (or d(n) >= d(n-1)+1) fails.
struct Witness {
  int m = 0;
  std::uint64_t n = 0;
  Coefficient previous;  // d(n-1)
  Coefficient current;   // d(n)
};

struct UnimodalityVerdict {
  int k = 0;  // 0 when checked on a bare array
  int m = 0;
  std::uint64_t N = 0;
  bool is_symmetric = false;
  /// n in [1, ceil(N/2)] with c[n] < c[n-1], ascending.
  std::vector<std::uint64_t> violations;
  bool is_unimodal = false;
  /// Smallest s with c[n] >= c[n-1]+1 for every s <= n <= ceil(N/2).
  std::optional<std::uint64_t> strict_from;
};

enum class WindowMode { weak, strict };

const char* to_string(WindowMode mode) noexcept;

struct WindowCheck {
  int m = 0;
  std::uint64_t lo = 1;
  std::uint64_t hi = 1;
  WindowMode mode = WindowMode::weak;
  bool passed = false;
  std::optional<std::uint64_t> first_failure;
};

bool check_symmetric(const CoefficientArray& c);
bool check_symmetric(const DensePolynomial& p);

/// Unimodality on the first half. Throws not-symmetric for asymmetric input,
/// since the first-half criterion only characterises unimodality of a
/// palindromic sequence.
UnimodalityVerdict check_unimodal(const CoefficientArray& c);
UnimodalityVerdict check_unimodal(const DensePolynomial& p);

/// Requires 1 <= lo <= hi <= N, else window-out-of-range.
WindowCheck check_window(const CoefficientArray& c, std::uint64_t lo, std::uint64_t hi,
                         WindowMode mode);
WindowCheck check_window(const DensePolynomial& p, std::uint64_t lo, std::uint64_t hi,
                         WindowMode mode);

/// Largest m with m < 8 k^{3/2}, decided exactly as m^2 < 64 k^3.
int threshold_m_max(int k);

/// [ceil(k(k-1)m^2/4), floor(k(k-1)(m+1)^2/4)].
std::pair<std::uint64_t, std::uint64_t> growth_window(int k, int m);

/// Base-case verdict plus one weak window check per level m0 < m <= threshold.
struct LevelRecord {
  WindowCheck window;
  bool strict_held = false;
  std::string coeff_digest;
};

enum class CertificateStatus { verified, refuted };

const char* to_string(CertificateStatus status) noexcept;

struct VerificationCertificate {
  int k = 0;
  int m0 = 0;
  int threshold_m_max = 0;
  UnimodalityVerdict base_case;
  std::string base_digest;
  std::vector<LevelRecord> levels;
  CertificateStatus status = CertificateStatus::refuted;
  std::optional<Witness> witness;
  /// False when the run stopped at a refutation before the threshold.
  bool complete = false;
};

struct VerifyOptions {
  BuildOptions build;
  /// When set, D_{k,m} and the partial certificate are saved after every level.
  std::optional<std::filesystem::path> checkpoint_dir;
  bool resume = false;
  bool continue_after_refutation = false;
  std::function<void(const LevelRecord&)> on_level;
};

std::filesystem::path certificate_checkpoint_path(const std::filesystem::path& dir, int k, int m0);
std::filesystem::path certificate_progress_path(const std::filesystem::path& dir, int k, int m0);

/// Checks that D_{k,m0} is unimodal and that d_{k,m}(n) >= d_{k,m}(n-1) on
/// growth_window(k, m) for every m0 < m <= threshold_m_max(k), extending the
/// polynomial one level at a time. Together with the analytic bound for
/// m >= 8k^{3/2} this establishes unimodality of D_{k,m} for all m >= m0.
/// Requires k >= 5. A failed check yields status refuted with a witness.
VerificationCertificate certify_unimodal_from(int k, int m0, const VerifyOptions& options = {});

/// Per-level outcome of the k = 4 exceptional profile.
struct K4Level {
  int m = 0;
  bool symmetric = false;
  std::vector<std::uint64_t> violations;
  /// d(0..4) = 1, 1, 1, 2, 1.
  bool initial_values_ok = false;
  /// Empty at m = 0 and exactly {4} for m >= 1.
  bool exact_profile = false;
  /// For m >= 64: [5, 12m+20] weak and [12m+21, 3(m+1)^2] strict.
  std::optional<WindowCheck> low_window;
  std::optional<WindowCheck> high_window;
  std::string coeff_digest;
};

struct K4ProfileReport {
  int m_max = 0;
  std::vector<K4Level> levels;
  /// Every level symmetric, violations within {4}, initial values as listed,
  /// and both windows passing wherever they apply.
  bool verified = false;
  std::optional<Witness> witness;
};

inline constexpr int kK4WindowStart = 64;

K4ProfileReport verify_k4_profile(int m_max, const BuildOptions& options = {});

struct RecurrenceCheck {
  int k = 0;
  int m = 0;
  long long n = 0;
  Coefficient lhs;  // d_{k,m}(n)
  Coefficient rhs;  // sum of shifted d_{k,m-1}
  bool holds = false;
};

/// d_{4,m}(n) against the eight shifted d_{4,m-1} terms at shifts
/// 0, 4m+1, 4m+2, 4m+3, 8m+3, 8m+4, 8m+5, 12m+6. One term of the published
/// recurrence carries the subscript "n-1"; it is read as m-1.
RecurrenceCheck check_recurrence_k4(const DensePolynomial& previous,
                                    const DensePolynomial& current, long long n);
RecurrenceCheck check_recurrence_k4(int m, long long n);

/// d_{k,m}(n) against the sum over all 2^{k-1} choices i_j in {0, km+j}.
/// Throws combinatorial-blowup for k > 16.
RecurrenceCheck check_recurrence_general(const DensePolynomial& previous,
                                         const DensePolynomial& current, long long n);
RecurrenceCheck check_recurrence_general(int k, int m, long long n);

/// d(n) with zero outside [0, N].
Coefficient coefficient_or_zero(const DensePolynomial& p, long long n);

}  // namespace regulo
