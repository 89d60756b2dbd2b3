#include "regulo/report_json.hpp"

#include "regulo/error.hpp"

namespace regulo {
namespace {

using nlohmann::json;

json optional_index(const std::optional<std::uint64_t>& v) {
  return v ? json(*v) : json(nullptr);
}

std::optional<std::uint64_t> read_optional_index(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<std::uint64_t>();
}

WindowMode window_mode_from(const std::string& s) {
  if (s == "weak") return WindowMode::weak;
  if (s == "strict") return WindowMode::strict;
  throw Error(ErrorKind::corrupt_checkpoint, "unknown window mode '" + s + "'");
}

UnimodalityVerdict verdict_from(const json& j) {
  UnimodalityVerdict v;
  v.k = j.at("k").get<int>();
  v.m = j.at("m").get<int>();
  v.N = j.at("N").get<std::uint64_t>();
  v.is_symmetric = j.at("is_symmetric").get<bool>();
  v.is_unimodal = j.at("is_unimodal").get<bool>();
  v.violations = j.at("violations").get<std::vector<std::uint64_t>>();
  v.strict_from = read_optional_index(j.at("strict_from"));
  return v;
}

WindowCheck window_from(const json& j) {
  WindowCheck w;
  w.m = j.at("m").get<int>();
  const auto bounds = j.at("window").get<std::vector<std::uint64_t>>();
  if (bounds.size() != 2) throw Error(ErrorKind::corrupt_checkpoint, "window needs two bounds");
  w.lo = bounds[0];
  w.hi = bounds[1];
  w.mode = window_mode_from(j.at("mode").get<std::string>());
  w.passed = j.at("passed").get<bool>();
  w.first_failure = read_optional_index(j.at("first_failure"));
  return w;
}

Witness witness_from(const json& j) {
  Witness w;
  w.m = j.at("m").get<int>();
  w.n = j.at("n").get<std::uint64_t>();
  w.previous = Coefficient(j.at("d_n_minus_1").get<std::string>());
  w.current = Coefficient(j.at("d_n").get<std::string>());
  return w;
}

json parameters_json(const std::vector<std::pair<std::string, double>>& params) {
  json out = json::object();
  for (const auto& [name, value] : params) out[name] = value;
  return out;
}

}  // namespace

json to_json(const UnimodalityVerdict& v) {
  return {{"k", v.k},
          {"m", v.m},
          {"N", v.N},
          {"is_symmetric", v.is_symmetric},
          {"is_unimodal", v.is_unimodal},
          {"violations", v.violations},
          {"strict_from", optional_index(v.strict_from)}};
}

json to_json(const WindowCheck& w) {
  return {{"m", w.m},
          {"window", {w.lo, w.hi}},
          {"mode", to_string(w.mode)},
          {"passed", w.passed},
          {"first_failure", optional_index(w.first_failure)}};
}

json to_json(const LevelRecord& level) {
  json j = to_json(level.window);
  j["strict_held"] = level.strict_held;
  j["coeff_digest"] = level.coeff_digest;
  return j;
}

json to_json(const Witness& w) {
  return {{"m", w.m}, {"n", w.n}, {"d_n_minus_1", w.previous.str()}, {"d_n", w.current.str()}};
}

json to_json(const VerificationCertificate& cert) {
  json base = to_json(cert.base_case);
  base["coeff_digest"] = cert.base_digest;
  json levels = json::array();
  for (const auto& level : cert.levels) levels.push_back(to_json(level));
  return {{"kind", "unimodality-certificate"},
          {"k", cert.k},
          {"m0", cert.m0},
          {"threshold_m_max", cert.threshold_m_max},
          {"status", to_string(cert.status)},
          {"complete", cert.complete},
          {"base_case", std::move(base)},
          {"levels", std::move(levels)},
          {"witness", cert.witness ? to_json(*cert.witness) : json(nullptr)},
          {"tool_version", kToolVersion}};
}

VerificationCertificate certificate_from_json(const json& j) {
  try {
    if (j.at("kind").get<std::string>() != "unimodality-certificate") {
      throw Error(ErrorKind::corrupt_checkpoint, "not a unimodality certificate");
    }
    VerificationCertificate cert;
    cert.k = j.at("k").get<int>();
    cert.m0 = j.at("m0").get<int>();
    cert.threshold_m_max = j.at("threshold_m_max").get<int>();
    const std::string status = j.at("status").get<std::string>();
    cert.status = status == "verified" ? CertificateStatus::verified : CertificateStatus::refuted;
    cert.complete = j.at("complete").get<bool>();
    cert.base_case = verdict_from(j.at("base_case"));
    cert.base_digest = j.at("base_case").at("coeff_digest").get<std::string>();
    for (const auto& level : j.at("levels")) {
      LevelRecord r;
      r.window = window_from(level);
      r.strict_held = level.at("strict_held").get<bool>();
      r.coeff_digest = level.at("coeff_digest").get<std::string>();
      cert.levels.push_back(std::move(r));
    }
    if (!j.at("witness").is_null()) cert.witness = witness_from(j.at("witness"));
    return cert;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::corrupt_checkpoint, std::string("malformed certificate: ") + e.what());
  }
}

json to_json(const K4ProfileReport& report) {
  json levels = json::array();
  for (const auto& level : report.levels) {
    levels.push_back({{"m", level.m},
                      {"symmetric", level.symmetric},
                      {"violations", level.violations},
                      {"initial_values_ok", level.initial_values_ok},
                      {"exact_profile", level.exact_profile},
                      {"low_window", level.low_window ? to_json(*level.low_window) : json(nullptr)},
                      {"high_window", level.high_window ? to_json(*level.high_window) : json(nullptr)},
                      {"coeff_digest", level.coeff_digest}});
  }
  return {{"kind", "k4-profile"},
          {"m_max", report.m_max},
          {"verified", report.verified},
          {"levels", std::move(levels)},
          {"witness", report.witness ? to_json(*report.witness) : json(nullptr)},
          {"tool_version", kToolVersion}};
}

json to_json(const RecurrenceCheck& check) {
  return {{"kind", "recurrence-check"},
          {"k", check.k},
          {"m", check.m},
          {"n", check.n},
          {"lhs", check.lhs.str()},
          {"rhs", check.rhs.str()},
          {"holds", check.holds},
          {"tool_version", kToolVersion}};
}

json to_json(const audit::QuadratureResult& q) {
  return {{"value", q.value},
          {"error_estimate", q.error_estimate},
          {"panels_used", q.panels_used},
          {"evaluations", q.evaluations}};
}

json to_json(const audit::SplitIntegral& s) {
  return {{"k", s.k},
          {"m", s.m},
          {"mu", s.mu},
          {"splits", {s.first_split, s.second_split}},
          {"I1", to_json(s.head)},
          {"I2", to_json(s.middle)},
          {"I3", to_json(s.tail)},
          {"I", s.value()},
          {"error_estimate", s.error_estimate()}};
}

json to_json(const audit::AuditReport& report) {
  json entries = json::array();
  std::size_t failed = 0;
  for (const auto& e : report.entries) {
    if (!e.passed) ++failed;
    entries.push_back({{"check", e.check},
                       {"parameters", parameters_json(e.parameters)},
                       {"value", e.value},
                       {"bound", e.bound},
                       {"margin", e.margin},
                       {"error_estimate", e.error_estimate},
                       {"passed", e.passed}});
  }
  return {{"kind", "analytic-audit"},
          {"status", audit::kAuditStatus},
          {"all_passed", failed == 0},
          {"checks", report.entries.size()},
          {"failed", failed},
          {"entries", std::move(entries)},
          {"tool_version", kToolVersion}};
}

}  // namespace regulo
