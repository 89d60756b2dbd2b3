#include "regulo/lemma_audit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <set>

#include "regulo/error.hpp"
#include "regulo/poly_engine.hpp"
#include "regulo/unimodality.hpp"

namespace regulo::audit {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = std::numbers::pi / 2;

// Kronrod nodes on [0, 1] (symmetric), odd indices are the Gauss nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double error;
};

bool by_error(const Panel& lhs, const Panel& rhs) { return lhs.error < rhs.error; }

Panel gauss_kronrod(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kWgk[j] * pair;
    if (j % 2 == 1) gauss += kWg[j / 2] * pair;
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

double sum_errors(const std::vector<Panel>& panels) {
  double total = 0.0;
  for (const Panel& p : panels) total += p.error;
  return total;
}

double sum_values(const std::vector<Panel>& panels) {
  // Neumaier summation; many panels in the oscillatory tail nearly cancel.
  double sum = 0.0;
  double comp = 0.0;
  for (const Panel& p : panels) {
    const double t = sum + p.value;
    comp += std::abs(sum) >= std::abs(p.value) ? (sum - t) + p.value : (p.value - t) + sum;
    sum = t;
  }
  return sum + comp;
}

void require_audit_k(int k, int m) {
  if (k < 4) {
    throw Error(ErrorKind::sample_out_of_domain, "audit requires k >= 4, got k = " +
                                                     std::to_string(k));
  }
  if (!beyond_threshold(k, m)) {
    throw Error(ErrorKind::sample_out_of_domain,
                "audit requires m >= 8k^{3/2}; m = " + std::to_string(m) +
                    " is below it for k = " + std::to_string(k));
  }
}

bool near_pole(int k, double theta, double radius) {
  for (int i = 1; i <= k; ++i) {
    if (std::abs(theta - i * kPi / (2.0 * k)) < radius) return true;
  }
  return false;
}

AuditEntry make_entry(std::string check, std::vector<std::pair<std::string, double>> params,
                      double value, double bound, double margin, double error, bool passed) {
  return {std::move(check), std::move(params), value, bound, margin, error, passed};
}

// Entry for "value < bound" with no quadrature error.
AuditEntry below(std::string check, std::vector<std::pair<std::string, double>> params,
                 double value, double bound) {
  const double margin = bound - value;
  return make_entry(std::move(check), std::move(params), value, bound, margin, 0.0,
                    margin > 0.0);
}

int smallest_beyond_threshold(int k) { return threshold_m_max(k) + 1; }

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double abs_tol, std::size_t initial_panels,
                           std::size_t max_evaluations) {
  if (!(abs_tol > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw Error(ErrorKind::invalid_parameter, "quadrature needs finite limits and tol > 0");
  }
  if (a == b) return {};
  if (a > b) {
    QuadratureResult r = integrate(f, b, a, abs_tol, initial_panels, max_evaluations);
    r.value = -r.value;
    return r;
  }
  const std::size_t count = std::max<std::size_t>(1, initial_panels);
  if (count * 15 > max_evaluations) {
    throw Error(ErrorKind::non_convergence, "initial panels exceed the evaluation budget");
  }
  std::vector<Panel> heap;
  heap.reserve(count * 2);
  const double width = (b - a) / static_cast<double>(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double lo = a + width * static_cast<double>(i);
    const double hi = i + 1 == count ? b : a + width * static_cast<double>(i + 1);
    heap.push_back(gauss_kronrod(f, lo, hi));
  }
  std::make_heap(heap.begin(), heap.end(), by_error);
  std::size_t evaluations = count * 15;
  double total_error = sum_errors(heap);
  std::size_t since_resum = 0;

  while (total_error > abs_tol) {
    if (evaluations + 30 > max_evaluations) {
      throw Error(ErrorKind::non_convergence,
                  "quadrature budget of " + std::to_string(max_evaluations) +
                      " evaluations exhausted with error estimate " +
                      std::to_string(total_error));
    }
    std::pop_heap(heap.begin(), heap.end(), by_error);
    const Panel worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      throw Error(ErrorKind::non_convergence, "quadrature panel cannot be bisected further");
    }
    const Panel left = gauss_kronrod(f, worst.a, mid);
    const Panel right = gauss_kronrod(f, mid, worst.b);
    evaluations += 30;
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end(), by_error);
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end(), by_error);
    total_error += left.error + right.error - worst.error;
    if (++since_resum == 512 || total_error <= abs_tol) {
      total_error = sum_errors(heap);
      since_resum = 0;
    }
  }
  return {sum_values(heap), total_error, heap.size(), evaluations};
}

SignedLog cos_product_log(int k, int m, double theta) {
  SignedLog out;
  double sum = 0.0;
  double comp = 0.0;
  for (long long j = 0; j <= m; ++j) {
    for (long long l = 1; l < k; ++l) {
      const double c = std::cos(static_cast<double>(j * k + l) * theta);
      if (c == 0.0) return {0, -std::numeric_limits<double>::infinity()};
      if (c < 0.0) out.sign = -out.sign;
      const double y = std::log(std::abs(c)) - comp;
      const double t = sum + y;
      comp = (t - sum) - y;
      sum = t;
    }
  }
  out.log_abs = sum;
  return out;
}

double cos_product(int k, int m, double theta) {
  double product = 1.0;
  for (long long j = 0; j <= m; ++j) {
    for (long long l = 1; l < k; ++l) {
      product *= std::cos(static_cast<double>(j * k + l) * theta);
      if (std::abs(product) < 1e-280) {
        // Finish in log space so the tail factors cannot flush to zero early.
        if (product == 0.0) return 0.0;
        const SignedLog full = cos_product_log(k, m, theta);
        return full.sign == 0 ? 0.0 : full.sign * std::exp(full.log_abs);
      }
    }
  }
  return product;
}

long long mu_cap(int k, int m) {
  return static_cast<long long>(k) * (k - 1) * (2LL * m + 1) / 2;
}

QuadratureResult coefficient_by_quadrature(int k, int m, long long n, const QuadratureSpec& spec) {
  const PolyParams params = PolyParams::make(k, m);
  if (static_cast<long long>(params.factor_count()) > kCoefficientFactorGuard) {
    throw Error(ErrorKind::resolution_guard,
                "(k-1)(m+1) = " + std::to_string(params.factor_count()) +
                    " exceeds the double-precision guard of " +
                    std::to_string(kCoefficientFactorGuard));
  }
  if (n < 0 || static_cast<std::uint64_t>(n) > params.N) {
    throw Error(ErrorKind::invalid_parameter, "n must lie in [0, N]");
  }
  const double freq = static_cast<double>(static_cast<long long>(params.N) - 2 * n);
  const auto integrand = [&](double theta) {
    return std::cos(freq * theta) * cos_product(k, m, theta);
  };
  const std::size_t panels = std::max<std::size_t>(8, static_cast<std::size_t>(k) * (m + 1));
  QuadratureResult r = integrate(integrand, 0.0, kHalfPi, spec.abs_tol, panels,
                                 spec.max_evaluations);
  const double scale = std::ldexp(1.0, static_cast<int>(params.factor_count()) + 1) / kPi;
  r.value *= scale;
  r.error_estimate *= scale;
  return r;
}

SplitIntegral eval_I(int k, int m, long long mu, const QuadratureSpec& spec) {
  const PolyParams params = PolyParams::make(k, m);
  if (mu < 1) throw Error(ErrorKind::invalid_parameter, "mu must be at least 1");
  if (static_cast<long long>(params.factor_count()) > kSplitIntegralFactorGuard) {
    throw Error(ErrorKind::resolution_guard,
                "(k-1)(m+1) = " + std::to_string(params.factor_count()) +
                    " exceeds the guard of " + std::to_string(kSplitIntegralFactorGuard));
  }
  SplitIntegral out;
  out.k = k;
  out.m = m;
  out.mu = mu;
  out.first_split = 2.0 * kPi / (static_cast<double>(k) * (k - 1) * (2.0 * m + 1));
  out.second_split = kPi / (2.0 * k * m + 2.0 * (k - 1));

  const double freq = static_cast<double>(mu);
  const auto integrand = [&](double theta) {
    return theta * std::sin(freq * theta) * cos_product(k, m, theta);
  };
  // Near zero the integrand is about mu theta^2, so mu a^3/3 sets the scale
  // against which the absolute tolerance is measured.
  const double a = out.first_split;
  const double tol = spec.abs_tol * freq * a * a * a / 3.0;
  const double base = std::max(8.0, static_cast<double>(k) * (m + 1));
  const auto panels_for = [&](double lo, double hi) {
    return static_cast<std::size_t>(std::max(2.0, std::ceil(base * std::abs(hi - lo) / kHalfPi)));
  };
  out.head = integrate(integrand, 0.0, out.first_split, tol,
                       panels_for(0.0, out.first_split), spec.max_evaluations);
  out.middle = integrate(integrand, out.first_split, out.second_split, tol,
                         panels_for(out.first_split, out.second_split), spec.max_evaluations);
  out.tail = integrate(integrand, out.second_split, kHalfPi, tol,
                       panels_for(out.second_split, kHalfPi), spec.max_evaluations);
  return out;
}

double AnalyticConstants::gamma() { return -std::log(std::cos(1.0)); }

double c_k_of_m(double k, double m) {
  const double g = AnalyticConstants::gamma();
  const double kk = k * (k - 1);
  return kk * kk * (1.0 / (3 * m) + 1.0 / (3 * m * m) + 1.0 / (12 * m * m * m)) +
         g * kk *
             (k / 3 + k / m + (6 * k - 1) / (6 * m * m) + (2 * k - 1) / (6 * m * m * m));
}

double c_k_threshold_chain(double k) {
  const double g = AnalyticConstants::gamma();
  const double k15 = std::pow(k, 1.5);
  const double k3 = k * k * k;
  return k3 * (1.0 / 24 + 1.0 / (192 * k15) + 1.0 / (6144 * k3) +
               g * (1.0 / 3 + 1.0 / (8 * k15) + 1.0 / (64 * k3) + 1.0 / (1536 * k3 * k15)));
}

double c_k_k4_bracket() {
  const double k15 = 8.0;  // 4^{3/2}
  const double k3 = 64.0;
  return 1.0 / 24 + 1.0 / (192 * k15) + 1.0 / (6144 * k3) +
         0.616 * (1.0 / 3 + 1.0 / (8 * k15) + 1.0 / (64 * k3) + 1.0 / (1536 * k3 * k15));
}

double log_envelope(int k, int m, double theta) {
  const double kd = k;
  const double md = m;
  const double w = 2 * kd * md + 2 * kd - 1;
  const double v = (2 * md + 1) * kd;
  return -11.0 * (kd - 1) * (md + 1) / 32 + 3 * std::sin(w * theta) / (16 * std::sin(theta)) -
         std::sin(2 * w * theta) / (64 * std::sin(2 * theta)) -
         3 * std::sin(v * theta) / (16 * std::sin(kd * theta)) +
         std::sin(2 * v * theta) / (64 * std::sin(2 * kd * theta));
}

double f_k(double k, double m) {
  return std::pow(kPi, 3) * std::pow(k, 4.5) * std::pow(m, 1.5) / 5130 *
         std::exp(-kPi * kPi * m / (6 * k));
}

double g_k(double k, double m) {
  return std::pow(kPi, 3) * std::pow(k, 4.5) * std::pow(m, 4.5) / (3.34 * 24) *
         std::exp(-0.381 * m - 0.224);
}

double h_1(double k) { return std::exp(-4 * kPi * kPi * std::sqrt(k) / 3) * std::pow(k, 6.75); }

double h_2(double k) { return std::exp(-3.048 * std::pow(k, 1.5) - 0.224) * std::pow(k, 11.25); }

double f_k_at_threshold(double k) { return std::pow(8.0, 1.5) * std::pow(kPi, 3) / 5130 * h_1(k); }

double g_k_at_threshold(double k) {
  return std::pow(8.0, 4.5) * std::pow(kPi, 3) / (3.34 * 24) * h_2(k);
}

bool beyond_threshold(int k, int m) {
  if (k < 1 || m < 0) return false;
  const long double kk = k;
  return static_cast<long double>(m) * m >= 64.0L * kk * kk * kk;
}

bool AuditReport::all_passed() const noexcept {
  return std::all_of(entries.begin(), entries.end(),
                     [](const AuditEntry& e) { return e.passed; });
}

void AuditReport::append(AuditReport other) {
  entries.insert(entries.end(), std::make_move_iterator(other.entries.begin()),
                 std::make_move_iterator(other.entries.end()));
}

AuditReport check_identities(std::span<const IdentitySample> samples) {
  AuditReport report;
  for (const IdentitySample& s : samples) {
    if (s.n < 1) throw Error(ErrorKind::invalid_parameter, "identity samples need n >= 1");
    const double sx = std::sin(s.x);
    const double s2x = std::sin(2 * s.x);
    if (std::abs(sx) < kPoleRadius || std::abs(s2x) < kPoleRadius) {
      throw Error(ErrorKind::pole_proximity,
                  "x = " + std::to_string(s.x) + " is within 1e-8 of a pole of the closed forms");
    }
    double quad_sum = 0.0;
    double quartic_sum = 0.0;
    for (int j = 1; j <= s.n; ++j) {
      const double v = std::sin(j * s.x);
      quad_sum += v * v;
      quartic_sum += v * v * v * v;
    }
    const double n = s.n;
    const double ratio = std::sin((2 * n + 1) * s.x) / (4 * sx);
    const double quad_closed = n / 2 - ratio + 0.25;
    const double quartic_closed =
        3 * n / 8 - ratio + std::sin((2 * n + 1) * 2 * s.x) / (16 * s2x) + 3.0 / 16;
    const std::vector<std::pair<std::string, double>> params{{"x", s.x}, {"n", n}};
    const double d2 = std::abs(quad_sum - quad_closed);
    const double d4 = std::abs(quartic_sum - quartic_closed);
    report.entries.push_back(
        below("sin^2 sum closed form", params, d2, kIdentityTolerance));
    report.entries.push_back(
        below("sin^4 sum closed form", params, d4, kIdentityTolerance));
  }
  return report;
}

std::vector<IdentitySample> random_identity_samples(std::size_t count, std::uint64_t seed,
                                                    double clearance) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> xs(0.0, 2 * kPi);
  std::uniform_int_distribution<int> ns(1, 100);
  std::vector<IdentitySample> out;
  out.reserve(count);
  while (out.size() < count) {
    const double x = xs(rng);
    const int n = ns(rng);
    if (std::abs(std::sin(x)) < clearance || std::abs(std::sin(2 * x)) < clearance) continue;
    out.push_back({x, n});
  }
  return out;
}

AuditReport check_constants(const ConstantsSample& sample, const QuadratureSpec& spec) {
  const int k = sample.k;
  const int m = sample.m;
  require_audit_k(k, m);
  const double kd = k;
  const double md = m;
  const double lower = kPi / (2.0 * k * m + 2.0 * (k - 1));
  for (double theta : sample.thetas) {
    if (!(theta >= lower && theta <= kHalfPi) || near_pole(k, theta, kPoleRadius)) {
      throw Error(ErrorKind::sample_out_of_domain,
                  "theta = " + std::to_string(theta) +
                      " is outside [pi/(2km+2(k-1)), pi/2] or near a pole i*pi/(2k)");
    }
  }
  const long long cap = mu_cap(k, m);
  for (long long mu : sample.mus) {
    if (mu < 1 || mu > cap) {
      throw Error(ErrorKind::sample_out_of_domain,
                  "mu = " + std::to_string(mu) + " is outside [1, " + std::to_string(cap) + "]");
    }
  }

  AuditReport report;
  const std::vector<std::pair<std::string, double>> km{{"k", kd}, {"m", md}};
  const double ck = c_k_of_m(kd, md);
  const double threshold_m = 8 * std::pow(kd, 1.5);
  const double ck_threshold = c_k_of_m(kd, threshold_m);
  report.entries.push_back(below("c_k(m) < 0.26 k^3", km, ck, AnalyticConstants::c_k_cap * kd * kd * kd));
  {
    // c_k decreases in m, so this only needs to hold up to rounding.
    const double slack = 1e-12 * ck_threshold;
    AuditEntry e = below("c_k(m) <= c_k(8k^{3/2})", km, ck, ck_threshold);
    e.passed = e.margin >= -slack;
    report.entries.push_back(std::move(e));
  }
  report.entries.push_back(below("c_k(8k^{3/2}) <= threshold chain", km, ck_threshold,
                                 c_k_threshold_chain(kd)));

  const double envelope_cap =
      -AnalyticConstants::envelope_slope * md - AnalyticConstants::envelope_intercept;
  for (double theta : sample.thetas) {
    const std::vector<std::pair<std::string, double>> params{{"k", kd}, {"m", md}, {"theta", theta}};
    const double log_e = log_envelope(k, m, theta);
    report.entries.push_back(below("log E(theta) < -0.381m - 0.224", params, log_e, envelope_cap));
    if (theta < kPi / (2 * kd)) {
      report.entries.push_back(
          below("log E(theta) <= -0.381m - 0.397 below pi/(2k)", params, log_e, -0.381 * md - 0.397));
    } else {
      report.entries.push_back(
          below("log E(theta) <= -0.5m - 0.224 from pi/(2k)", params, log_e, -0.5 * md - 0.224));
    }
    const SignedLog p = cos_product_log(k, m, theta);
    const double log_p = p.sign == 0 ? std::numeric_limits<double>::lowest() : p.log_abs;
    AuditEntry e = below("log |P(theta)| <= log E(theta)", params, log_p, log_e);
    e.passed = e.margin >= -1e-9;
    report.entries.push_back(std::move(e));
  }

  for (long long mu : sample.mus) {
    const SplitIntegral s = eval_I(k, m, mu, spec);
    const double mud = static_cast<double>(mu);
    const std::vector<std::pair<std::string, double>> params{{"k", kd}, {"m", md}, {"mu", mud}};
    const double lower_head =
        AnalyticConstants::head_lower_coeff * mud / (std::pow(kd, 4.5) * std::pow(md, 4.5));
    {
      const double margin = s.head.value - lower_head;
      report.entries.push_back(make_entry("I1 >= 3.34 mu / (k m)^{9/2}", params, s.head.value,
                                          lower_head, margin, s.head.error_estimate,
                                          margin > s.head.error_estimate));
    }
    {
      const double bound = AnalyticConstants::middle_ratio_cap * s.head.value;
      const double value = std::abs(s.middle.value);
      const double err =
          s.middle.error_estimate + AnalyticConstants::middle_ratio_cap * s.head.error_estimate;
      report.entries.push_back(make_entry("|I2| <= 5.89e-9 I1", params, value, bound,
                                          bound - value, err, bound - value > err));
    }
    {
      const double bound = AnalyticConstants::tail_ratio_cap * s.head.value;
      const double value = std::abs(s.tail.value);
      const double err =
          s.tail.error_estimate + AnalyticConstants::tail_ratio_cap * s.head.error_estimate;
      report.entries.push_back(make_entry("|I3| <= 0.55 I1", params, value, bound,
                                          bound - value, err, bound - value > err));
    }
    report.entries.push_back(make_entry("I > 0", params, s.value(), 0.0, s.value(),
                                        s.error_estimate(), s.value() > s.error_estimate()));
  }
  return report;
}

AuditReport check_monotonicity(std::span<const int> ks, int m_span) {
  if (m_span < 1) throw Error(ErrorKind::invalid_parameter, "m_span must be positive");
  AuditReport report;
  const std::set<int> sorted(ks.begin(), ks.end());
  for (int k : sorted) {
    if (k < 4) {
      throw Error(ErrorKind::sample_out_of_domain, "monotonicity checks need k >= 4");
    }
    const double kd = k;
    const int m_first = smallest_beyond_threshold(k);
    const int m_last = m_first + m_span;
    double f_ratio = 0.0;
    double g_ratio = 0.0;
    for (int m = m_first; m < m_last; ++m) {
      f_ratio = std::max(f_ratio, f_k(kd, m + 1) / f_k(kd, m));
      g_ratio = std::max(g_ratio, g_k(kd, m + 1) / g_k(kd, m));
    }
    const std::vector<std::pair<std::string, double>> span{
        {"k", kd}, {"m_first", static_cast<double>(m_first)}, {"m_last", static_cast<double>(m_last)}};
    report.entries.push_back(below("max f_k(m+1)/f_k(m) < 1", span, f_ratio, 1.0));
    report.entries.push_back(below("max g_k(m+1)/g_k(m) < 1", span, g_ratio, 1.0));

    const std::vector<std::pair<std::string, double>> at{{"k", kd}, {"m", static_cast<double>(m_first)}};
    const double threshold_m = 8 * std::pow(kd, 1.5);
    {
      AuditEntry e = below("f_k(m) <= f_k(8k^{3/2})", at, f_k(kd, m_first), f_k_at_threshold(kd));
      e.passed = e.margin >= -1e-12 * e.bound;
      report.entries.push_back(std::move(e));
    }
    {
      AuditEntry e = below("g_k(m) <= g_k(8k^{3/2})", at, g_k(kd, m_first), g_k_at_threshold(kd));
      e.passed = e.margin >= -1e-12 * e.bound;
      report.entries.push_back(std::move(e));
    }
    const std::vector<std::pair<std::string, double>> kp{{"k", kd}};
    const double f_direct = f_k(kd, threshold_m);
    const double g_direct = g_k(kd, threshold_m);
    report.entries.push_back(below("f_k(8k^{3/2}) closed form, relative difference", kp,
                                   std::abs(f_k_at_threshold(kd) - f_direct) / f_direct, 1e-12));
    report.entries.push_back(below("g_k(8k^{3/2}) closed form, relative difference", kp,
                                   std::abs(g_k_at_threshold(kd) - g_direct) / g_direct, 1e-12));
  }
  for (auto it = sorted.begin(); it != sorted.end() && std::next(it) != sorted.end(); ++it) {
    const double a = *it;
    const double b = *std::next(it);
    const std::vector<std::pair<std::string, double>> pair{{"k", a}, {"k_next", b}};
    report.entries.push_back(below("h_1(k_next) < h_1(k)", pair, h_1(b), h_1(a)));
    report.entries.push_back(below("h_2(k_next) < h_2(k)", pair, h_2(b), h_2(a)));
  }
  const std::vector<std::pair<std::string, double>> k4{{"k", 4.0}};
  report.entries.push_back(below("c_k chain bracket at k = 4 < 0.26", k4, c_k_k4_bracket(), 0.26));
  report.entries.push_back(
      below("8^{3/2} pi^3 / 5130 * h_1(4) < 5.89e-9", k4, f_k_at_threshold(4.0), 5.89e-9));
  report.entries.push_back(
      below("8^{9/2} pi^3 / (3.34 * 24) * h_2(4) < 0.55", k4, g_k_at_threshold(4.0), 0.55));
  return report;
}

std::vector<double> theta_samples(int k, int m, std::size_t count, std::uint64_t seed) {
  const double lower = kPi / (2.0 * k * m + 2.0 * (k - 1));
  std::vector<double> out;
  if (count == 0) return out;
  out.reserve(count);
  out.push_back(lower);
  std::mt19937_64 rng(seed ^ (static_cast<std::uint64_t>(k) << 32) ^ static_cast<std::uint64_t>(m));
  std::uniform_real_distribution<double> dist(lower, kHalfPi);
  while (out.size() < count) {
    const double t = dist(rng);
    if (near_pole(k, t, 1e-6)) continue;
    out.push_back(t);
  }
  return out;
}

std::vector<long long> mu_samples(int k, int m, std::size_t count, std::uint64_t seed) {
  const long long cap = mu_cap(k, m);
  std::vector<long long> out;
  if (count == 0) return out;
  out.push_back(1);
  if (count > 1) out.push_back(cap);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL ^ (static_cast<std::uint64_t>(k) << 32) ^
                      static_cast<std::uint64_t>(m));
  std::uniform_int_distribution<long long> dist(1, cap);
  while (out.size() < count) out.push_back(dist(rng));
  return out;
}

AuditReport run_lemma_audit(const AuditPlan& plan) {
  AuditReport report;
  const auto identities = random_identity_samples(plan.identity_samples, plan.seed);
  report.append(check_identities(identities));
  for (int k : plan.ks) {
    for (int m : plan.ms) {
      require_audit_k(k, m);
      ConstantsSample sample{k, m, theta_samples(k, m, plan.theta_count, plan.seed),
                             mu_samples(k, m, plan.mu_count, plan.seed)};
      report.append(check_constants(sample, plan.quad));
    }
  }
  report.append(check_monotonicity(plan.monotone_ks, plan.monotone_m_span));
  return report;
}

}  // namespace regulo::audit
