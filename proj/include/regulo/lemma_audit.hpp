#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

// Numerical spot-checks of the Fourier-integral machinery behind the growth
// bound for m >= 8k^{3/2}. Everything here is floating-point evidence, not proof.
namespace regulo::audit {

struct QuadratureSpec {
  /// Per-integral absolute tolerance, in units of the integrand's natural scale.
  double abs_tol = 1e-12;
  std::size_t max_evaluations = 10'000'000;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t panels_used = 0;
  std::size_t evaluations = 0;
};

/// Globally adaptive 7-point Gauss / 15-point Kronrod quadrature. Starts from
/// `initial_panels` equal panels and bisects the panel with the largest
/// |K15 - G7| until the summed estimate is at most `abs_tol`. Throws
/// non-convergence when the evaluation budget runs out first.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double abs_tol, std::size_t initial_panels,
                           std::size_t max_evaluations = 10'000'000);

/// prod_{j=0..m} prod_{l=1..k-1} cos((jk+l) theta).
double cos_product(int k, int m, double theta);

struct SignedLog {
  int sign = 1;  // 0 when a factor vanishes
  double log_abs = 0.0;
};

/// The same product as sign and log-magnitude, immune to underflow.
SignedLog cos_product_log(int k, int m, double theta);

/// d_{k,m}(n) = 2^{F+1}/pi * int_0^{pi/2} cos((N-2n) theta) P(theta) dtheta,
/// F = (k-1)(m+1). Value and error estimate are on the coefficient scale.
/// Resolution guard: F <= 40.
QuadratureResult coefficient_by_quadrature(int k, int m, long long n,
                                           const QuadratureSpec& spec = {});

inline constexpr long long kCoefficientFactorGuard = 40;
inline constexpr long long kSplitIntegralFactorGuard = 1000;

/// I_{k,m}(mu) = int_0^{pi/2} theta sin(mu theta) P(theta) dtheta, split at
/// 2pi/(k(k-1)(2m+1)) and pi/(2km+2(k-1)).
struct SplitIntegral {
  int k = 0;
  int m = 0;
  long long mu = 0;
  double first_split = 0.0;
  double second_split = 0.0;
  QuadratureResult head;    // [0, first_split]
  QuadratureResult middle;  // [first_split, second_split]
  QuadratureResult tail;    // [second_split, pi/2]

  double value() const noexcept { return head.value + middle.value + tail.value; }
  double error_estimate() const noexcept {
    return head.error_estimate + middle.error_estimate + tail.error_estimate;
  }
};

SplitIntegral eval_I(int k, int m, long long mu, const QuadratureSpec& spec = {});

/// Largest admissible frequency k(k-1)(2m+1)/2.
long long mu_cap(int k, int m);

// Constants and closed forms from the growth-bound argument.
struct AnalyticConstants {
  static double gamma();  // -log cos 1
  static constexpr double c_k_cap = 0.26;  // c_k(m) < 0.26 k^3
  static constexpr double envelope_slope = 0.381;
  static constexpr double envelope_intercept = 0.224;
  static constexpr double head_lower_coeff = 3.34;
  static constexpr double middle_ratio_cap = 5.89e-9;
  static constexpr double tail_ratio_cap = 0.55;
};

double c_k_of_m(double k, double m);
/// k^3 (1/24 + 1/(192 k^{3/2}) + 1/(6144 k^3) + gamma (1/3 + 1/(8k^{3/2}) +
/// 1/(64 k^3) + 1/(1536 k^{9/2}))). The published chain writes 1/(64 r^3);
/// r is read as k.
double c_k_threshold_chain(double k);
/// The bracket of c_k_threshold_chain evaluated at k = 4 with gamma rounded
/// up to 0.616; c_k < 0.26 k^3 rests on this staying below 0.26.
double c_k_k4_bracket();

/// log E_{k,m}(theta), the sin^2/sin^4 upper envelope for |P(theta)|.
double log_envelope(int k, int m, double theta);
double f_k(double k, double m);
double g_k(double k, double m);
double h_1(double k);
double h_2(double k);
/// f_k(8k^{3/2}) and g_k(8k^{3/2}) in the closed forms used for the bound.
double f_k_at_threshold(double k);
double g_k_at_threshold(double k);

/// True when m >= 8 k^{3/2}, decided exactly as m^2 >= 64 k^3.
bool beyond_threshold(int k, int m);

struct AuditEntry {
  std::string check;
  std::vector<std::pair<std::string, double>> parameters;
  double value = 0.0;
  double bound = 0.0;
  /// Sign convention per check: positive means the claim holds with room.
  double margin = 0.0;
  double error_estimate = 0.0;
  bool passed = false;
};

struct AuditReport {
  std::vector<AuditEntry> entries;

  bool all_passed() const noexcept;
  void append(AuditReport other);
};

inline constexpr const char* kAuditStatus = "numerical spot-check (evidence, not proof)";

struct IdentitySample {
  double x = 0.0;
  int n = 1;
};

/// Sum of sin^2(jx) and sin^4(jx), j = 1..n, against their closed forms to
/// absolute tolerance 1e-10. Throws pole-proximity when |sin x| or |sin 2x|
/// is below 1e-8.
AuditReport check_identities(std::span<const IdentitySample> samples);

inline constexpr double kIdentityTolerance = 1e-10;
inline constexpr double kPoleRadius = 1e-8;

/// Random samples with |sin x| and |sin 2x| at least `clearance`.
std::vector<IdentitySample> random_identity_samples(std::size_t count, std::uint64_t seed,
                                                    double clearance = 1e-2);

struct ConstantsSample {
  int k = 4;
  int m = 64;
  std::vector<double> thetas;  // in [pi/(2km+2(k-1)), pi/2], off the poles i*pi/(2k)
  std::vector<long long> mus;  // in [1, mu_cap(k, m)]
};

/// Point checks at one (k, m): c_k(m) against 0.26k^3 and its threshold
/// chain, the E envelope at every theta, and the split-integral bounds at
/// every mu. Throws sample-out-of-domain for m < 8k^{3/2} or stray samples.
AuditReport check_constants(const ConstantsSample& sample, const QuadratureSpec& spec = {});

/// f_k and g_k decreasing over `m_span` consecutive m from the threshold for
/// each k, h_1 and h_2 decreasing over the sorted ks, and the threshold
/// closed forms.
AuditReport check_monotonicity(std::span<const int> ks, int m_span);

std::vector<double> theta_samples(int k, int m, std::size_t count, std::uint64_t seed);
std::vector<long long> mu_samples(int k, int m, std::size_t count, std::uint64_t seed);

struct AuditPlan {
  std::vector<int> ks{4};
  std::vector<int> ms{64, 70};
  std::size_t theta_count = 100;
  std::size_t mu_count = 20;
  std::uint64_t seed = 20240601;
  std::vector<int> monotone_ks{4, 5, 6, 7, 8, 9, 10, 11, 12};
  int monotone_m_span = 64;
  std::size_t identity_samples = 1000;
  QuadratureSpec quad;
};

AuditReport run_lemma_audit(const AuditPlan& plan);

}  // namespace regulo::audit
