#include "regulo/unimodality.hpp"

#include <fstream>
#include <string>

#include "regulo/checkpoint.hpp"
#include "regulo/error.hpp"
#include "regulo/report_json.hpp"

namespace regulo {

const char* to_string(WindowMode mode) noexcept {
  return mode == WindowMode::weak ? "weak" : "strict";
}

const char* to_string(CertificateStatus status) noexcept {
  return status == CertificateStatus::verified ? "verified" : "refuted";
}

bool check_symmetric(const CoefficientArray& c) {
  const std::size_t n = c.size();
  for (std::size_t i = 0; i < n / 2; ++i) {
    if (c.compare(i, n - 1 - i) != 0) return false;
  }
  return true;
}

bool check_symmetric(const DensePolynomial& p) { return check_symmetric(p.coeffs()); }

UnimodalityVerdict check_unimodal(const CoefficientArray& c) {
  if (c.empty()) throw Error(ErrorKind::invalid_parameter, "empty coefficient array");
  if (!check_symmetric(c)) {
    throw Error(ErrorKind::not_symmetric, "first-half unimodality test needs a palindrome");
  }
  UnimodalityVerdict v;
  v.N = c.size() - 1;
  v.is_symmetric = true;
  const std::uint64_t half = (v.N + 1) / 2;
  for (std::uint64_t n = 1; n <= half; ++n) {
    if (c.compare(n, n - 1) < 0) v.violations.push_back(n);
  }
  v.is_unimodal = v.violations.empty();
  std::uint64_t s = half + 1;
  while (s > 1 && c.compare(s - 1, s - 2) > 0) --s;
  if (s <= half) v.strict_from = s;
  return v;
}

UnimodalityVerdict check_unimodal(const DensePolynomial& p) {
  UnimodalityVerdict v = check_unimodal(p.coeffs());
  v.k = p.params().k;
  v.m = p.params().m;
  return v;
}

WindowCheck check_window(const CoefficientArray& c, std::uint64_t lo, std::uint64_t hi,
                         WindowMode mode) {
  if (c.empty() || lo < 1 || lo > hi || hi > c.size() - 1) {
    throw Error(ErrorKind::window_out_of_range,
                "window [" + std::to_string(lo) + ", " + std::to_string(hi) +
                    "] is not inside [1, N]");
  }
  WindowCheck w;
  w.lo = lo;
  w.hi = hi;
  w.mode = mode;
  w.passed = true;
  for (std::uint64_t n = lo; n <= hi; ++n) {
    const auto order = c.compare(n, n - 1);
    const bool ok = mode == WindowMode::weak ? order >= 0 : order > 0;
    if (!ok) {
      w.passed = false;
      w.first_failure = n;
      break;
    }
  }
  return w;
}

WindowCheck check_window(const DensePolynomial& p, std::uint64_t lo, std::uint64_t hi,
                         WindowMode mode) {
  WindowCheck w = check_window(p.coeffs(), lo, hi, mode);
  w.m = p.params().m;
  return w;
}

int threshold_m_max(int k) {
  if (k < 2) throw Error(ErrorKind::invalid_parameter, "k must be >= 2");
  const auto bound = 64ULL * static_cast<unsigned long long>(k) * k * k;
  unsigned long long m = 0;
  while ((m + 1) * (m + 1) < bound) ++m;
  return static_cast<int>(m);
}

std::pair<std::uint64_t, std::uint64_t> growth_window(int k, int m) {
  const std::uint64_t kk = static_cast<std::uint64_t>(k) * static_cast<std::uint64_t>(k - 1);
  const auto um = static_cast<std::uint64_t>(m);
  const std::uint64_t lo_num = kk * um * um;
  const std::uint64_t hi_num = kk * (um + 1) * (um + 1);
  return {(lo_num + 3) / 4, hi_num / 4};
}

Coefficient coefficient_or_zero(const DensePolynomial& p, long long n) {
  if (n < 0 || static_cast<std::uint64_t>(n) > p.degree()) return 0;
  return p[static_cast<std::uint64_t>(n)];
}

namespace {

Witness witness_at(const DensePolynomial& p, std::uint64_t n) {
  return Witness{p.params().m, n, p[n - 1], p[n]};
}

void save_progress(const std::filesystem::path& dir, const VerificationCertificate& cert,
                   const DensePolynomial& p) {
  std::filesystem::create_directories(dir);
  save_checkpoint(p, certificate_checkpoint_path(dir, cert.k, cert.m0));
  const auto path = certificate_progress_path(dir, cert.k, cert.m0);
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << to_json(cert).dump(2) << '\n';
    if (!out) throw Error(ErrorKind::io_error, "cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

struct ResumeState {
  VerificationCertificate cert;
  DensePolynomial poly;
};

std::optional<ResumeState> try_resume(const std::filesystem::path& dir, int k, int m0) {
  const auto ckpt = certificate_checkpoint_path(dir, k, m0);
  const auto progress = certificate_progress_path(dir, k, m0);
  if (!std::filesystem::exists(ckpt) || !std::filesystem::exists(progress)) return std::nullopt;
  std::ifstream in(progress);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::corrupt_checkpoint, "unreadable progress file: " + std::string(e.what()));
  }
  VerificationCertificate cert = certificate_from_json(j);
  DensePolynomial poly = load_checkpoint(ckpt);
  const int expected_m = cert.levels.empty() ? cert.m0 : cert.levels.back().window.m;
  if (cert.k != k || cert.m0 != m0 || poly.params().k != k || poly.params().m != expected_m) {
    throw Error(ErrorKind::corrupt_checkpoint,
                "checkpoint and progress file disagree about the resume point");
  }
  return ResumeState{std::move(cert), std::move(poly)};
}

}  // namespace

std::filesystem::path certificate_checkpoint_path(const std::filesystem::path& dir, int k,
                                                  int m0) {
  return dir / ("certify_k" + std::to_string(k) + "_m0" + std::to_string(m0) + ".rpuc");
}

std::filesystem::path certificate_progress_path(const std::filesystem::path& dir, int k, int m0) {
  return dir / ("certify_k" + std::to_string(k) + "_m0" + std::to_string(m0) + ".progress.json");
}

VerificationCertificate certify_unimodal_from(int k, int m0, const VerifyOptions& options) {
  if (k < 5) {
    throw Error(ErrorKind::invalid_parameter,
                "the growth-window certificate applies to k >= 5; use the k = 4 profile");
  }
  if (m0 < 0) throw Error(ErrorKind::invalid_parameter, "m0 must be >= 0");

  std::optional<ResumeState> resumed;
  if (options.resume && options.checkpoint_dir) {
    resumed = try_resume(*options.checkpoint_dir, k, m0);
  }

  VerificationCertificate cert;
  std::optional<DensePolynomial> poly;
  if (resumed) {
    cert = std::move(resumed->cert);
    poly.emplace(std::move(resumed->poly));
  } else {
    cert.k = k;
    cert.m0 = m0;
    cert.threshold_m_max = threshold_m_max(k);
    poly.emplace(build(k, m0, options.build));
    cert.base_case = check_unimodal(*poly);
    cert.base_digest = polynomial_digest(*poly);
    if (!cert.base_case.is_unimodal) {
      cert.witness = witness_at(*poly, cert.base_case.violations.front());
    }
    if (options.checkpoint_dir) save_progress(*options.checkpoint_dir, cert, *poly);
  }

  auto refuted = [&] { return cert.witness.has_value(); };
  int m = poly->params().m;
  while (m < cert.threshold_m_max && (!refuted() || options.continue_after_refutation)) {
    poly.emplace(extend(std::move(*poly), options.build));
    m = poly->params().m;
    const auto [lo, hi] = growth_window(k, m);
    LevelRecord level;
    level.window = check_window(*poly, lo, hi, WindowMode::weak);
    level.strict_held =
        level.window.passed && check_window(*poly, lo, hi, WindowMode::strict).passed;
    level.coeff_digest = polynomial_digest(*poly);
    if (!level.window.passed && !cert.witness) {
      cert.witness = witness_at(*poly, *level.window.first_failure);
    }
    cert.levels.push_back(level);
    if (options.checkpoint_dir) save_progress(*options.checkpoint_dir, cert, *poly);
    if (options.on_level) options.on_level(level);
  }

  cert.complete = m >= cert.threshold_m_max;
  cert.status = (!refuted() && cert.complete) ? CertificateStatus::verified
                                              : CertificateStatus::refuted;
  return cert;
}

K4ProfileReport verify_k4_profile(int m_max, const BuildOptions& options) {
  if (m_max < 0) throw Error(ErrorKind::invalid_parameter, "m_max must be >= 0");
  K4ProfileReport report;
  report.m_max = m_max;
  report.verified = true;

  auto fail = [&](const DensePolynomial& p, std::uint64_t n) {
    report.verified = false;
    if (!report.witness) report.witness = witness_at(p, n);
  };

  std::optional<DensePolynomial> poly;
  for (int m = 0; m <= m_max; ++m) {
    poly.emplace(m == 0 ? build(4, 0, options) : extend(std::move(*poly), options));
    const DensePolynomial& p = *poly;

    K4Level level;
    level.m = m;
    level.symmetric = check_symmetric(p);
    level.coeff_digest = polynomial_digest(p);
    if (!level.symmetric) {
      report.verified = false;
      report.levels.push_back(level);
      continue;
    }
    level.violations = check_unimodal(p).violations;
    for (std::uint64_t n : level.violations) {
      if (n != 4) fail(p, n);
    }
    const std::uint64_t expected[] = {1, 1, 1, 2, 1};
    level.initial_values_ok = true;
    for (std::uint64_t n = 0; n < 5; ++n) {
      if (p[n] != expected[n]) level.initial_values_ok = false;
    }
    if (!level.initial_values_ok) report.verified = false;
    level.exact_profile = m == 0 ? level.violations.empty()
                                 : level.violations == std::vector<std::uint64_t>{4};

    if (m >= kK4WindowStart) {
      const auto um = static_cast<std::uint64_t>(m);
      level.low_window = check_window(p, 5, 12 * um + 20, WindowMode::weak);
      level.high_window =
          check_window(p, 12 * um + 21, 3 * (um + 1) * (um + 1), WindowMode::strict);
      if (!level.low_window->passed) fail(p, *level.low_window->first_failure);
      if (!level.high_window->passed) fail(p, *level.high_window->first_failure);
    }
    report.levels.push_back(std::move(level));
  }
  return report;
}

namespace {

void require_consecutive(const DensePolynomial& previous, const DensePolynomial& current) {
  if (previous.params().k != current.params().k ||
      previous.params().m + 1 != current.params().m) {
    throw Error(ErrorKind::invalid_parameter, "recurrence needs D_{k,m-1} and D_{k,m}");
  }
}

RecurrenceCheck finish(const DensePolynomial& current, long long n, Coefficient rhs) {
  RecurrenceCheck r;
  r.k = current.params().k;
  r.m = current.params().m;
  r.n = n;
  r.lhs = coefficient_or_zero(current, n);
  r.rhs = std::move(rhs);
  r.holds = r.lhs == r.rhs;
  return r;
}

}  // namespace

RecurrenceCheck check_recurrence_k4(const DensePolynomial& previous,
                                    const DensePolynomial& current, long long n) {
  require_consecutive(previous, current);
  if (current.params().k != 4) throw Error(ErrorKind::invalid_parameter, "k must be 4");
  const long long m = current.params().m;
  const long long shifts[] = {0,         4 * m + 1, 4 * m + 2, 4 * m + 3,
                              8 * m + 3, 8 * m + 4, 8 * m + 5, 12 * m + 6};
  Coefficient rhs = 0;
  for (long long s : shifts) rhs += coefficient_or_zero(previous, n - s);
  return finish(current, n, std::move(rhs));
}

RecurrenceCheck check_recurrence_k4(int m, long long n) {
  if (m < 1) throw Error(ErrorKind::invalid_parameter, "m must be >= 1");
  return check_recurrence_k4(build(4, m - 1), build(4, m), n);
}

RecurrenceCheck check_recurrence_general(const DensePolynomial& previous,
                                         const DensePolynomial& current, long long n) {
  require_consecutive(previous, current);
  const int k = current.params().k;
  const long long m = current.params().m;
  if (k > 16) {
    throw Error(ErrorKind::combinatorial_blowup,
                "2^(k-1) = 2^" + std::to_string(k - 1) + " choice vectors");
  }
  Coefficient rhs = 0;
  for (unsigned mask = 0; mask < (1U << (k - 1)); ++mask) {
    long long shift = 0;
    for (int j = 1; j < k; ++j) {
      if (mask & (1U << (j - 1))) shift += k * m + j;
    }
    rhs += coefficient_or_zero(previous, n - shift);
  }
  return finish(current, n, std::move(rhs));
}

RecurrenceCheck check_recurrence_general(int k, int m, long long n) {
  if (m < 1) throw Error(ErrorKind::invalid_parameter, "m must be >= 1");
  if (k > 16) {
    throw Error(ErrorKind::combinatorial_blowup,
                "2^(k-1) = 2^" + std::to_string(k - 1) + " choice vectors");
  }
  return check_recurrence_general(build(k, m - 1), build(k, m), n);
}

}  // namespace regulo
