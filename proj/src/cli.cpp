#include "regulo/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <iostream>
#include <mutex>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "regulo/checkpoint.hpp"
#include "regulo/error.hpp"
#include "regulo/lemma_audit.hpp"
#include "regulo/partition_oracle.hpp"
#include "regulo/report_json.hpp"
#include "regulo/unimodality.hpp"

namespace regulo {
namespace {

using nlohmann::json;

constexpr std::uint64_t kInlineCoefficientLimit = 10'000;

struct RunConfig {
  std::string subcommand;
  int k = 0;
  int m = 0;
  int m0 = 0;
  int m_max = 64;
  std::optional<long long> n;
  unsigned threads = 1;
  unsigned jobs = 1;
  std::string memory_limit_text;
  std::uint64_t memory_limit = kDefaultMemoryLimit;
  std::optional<std::filesystem::path> checkpoint_dir;
  bool resume = false;
  std::optional<std::filesystem::path> output;
  std::optional<double> tolerance;
  std::vector<int> only;
  std::vector<int> audit_ks{4};
  std::vector<int> audit_ms{64, 70};
};

struct Outcome {
  json report;
  int exit_code = kExitVerified;
};

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

BuildOptions build_options(const RunConfig& cfg) {
  return BuildOptions{cfg.threads, cfg.memory_limit};
}

json witness_json(int m, long long n, const std::string& lhs_name, const Coefficient& lhs,
                  const std::string& rhs_name, const Coefficient& rhs) {
  return {{"m", m}, {"n", n}, {lhs_name, lhs.str()}, {rhs_name, rhs.str()}};
}

Outcome run_build(const RunConfig& cfg) {
  const DensePolynomial p = build(cfg.k, cfg.m, build_options(cfg));
  json j{{"kind", "polynomial"},
         {"k", cfg.k},
         {"m", cfg.m},
         {"N", p.degree()},
         {"factor_count", p.params().factor_count()},
         {"coefficient_sum", p.coeffs().sum().str()},
         {"coeff_digest", polynomial_digest(p)},
         {"verdict", to_json(check_unimodal(p))},
         {"tool_version", kToolVersion}};
  if (p.degree() <= kInlineCoefficientLimit) {
    json coeffs = json::array();
    for (std::uint64_t n = 0; n <= p.degree(); ++n) coeffs.push_back(p[n].str());
    j["coefficients"] = std::move(coeffs);
  }
  if (cfg.checkpoint_dir) {
    std::filesystem::create_directories(*cfg.checkpoint_dir);
    const auto path = *cfg.checkpoint_dir /
                      ("D_k" + std::to_string(cfg.k) + "_m" + std::to_string(cfg.m) + ".rpuc");
    save_checkpoint(p, path);
    j["checkpoint"] = path.string();
  }
  return {std::move(j), kExitVerified};
}

VerifyOptions verify_options(const RunConfig& cfg) {
  VerifyOptions opts;
  opts.build = build_options(cfg);
  opts.checkpoint_dir = cfg.checkpoint_dir;
  opts.resume = cfg.resume;
  return opts;
}

Outcome run_verify(const RunConfig& cfg) {
  const VerificationCertificate cert = certify_unimodal_from(cfg.k, cfg.m0, verify_options(cfg));
  return {to_json(cert),
          cert.status == CertificateStatus::verified ? kExitVerified : kExitRefuted};
}

Outcome run_k4_profile(const RunConfig& cfg) {
  const K4ProfileReport report = verify_k4_profile(cfg.m_max, build_options(cfg));
  return {to_json(report), report.verified ? kExitVerified : kExitRefuted};
}

Outcome run_oracle(const RunConfig& cfg) {
  const long long n = *cfg.n;
  const PolyParams params = PolyParams::make(cfg.k, cfg.m);
  const Coefficient count = oracle::count(cfg.k, cfg.m, n);
  json j{{"kind", "oracle"},
         {"k", cfg.k},
         {"m", cfg.m},
         {"n", n},
         {"count", count.str()},
         {"tool_version", kToolVersion}};
  try {
    json parts = json::array();
    for (const auto& p : oracle::enumerate(cfg.k, cfg.m, n)) parts.push_back(p.parts);
    j["partitions"] = std::move(parts);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::output_cap_exceeded) throw;
    j["partitions"] = nullptr;
    j["partitions_omitted"] = e.what();
  }
  const bool in_range = n >= 0 && static_cast<std::uint64_t>(n) <= params.N;
  const Coefficient engine =
      in_range ? build(cfg.k, cfg.m, build_options(cfg))[static_cast<std::uint64_t>(n)]
               : Coefficient(0);
  j["engine_count"] = engine.str();
  j["agrees"] = engine == count;
  if (engine != count) {
    j["witness"] = witness_json(cfg.m, n, "oracle", count, "engine", engine);
    return {std::move(j), kExitRefuted};
  }
  return {std::move(j), kExitVerified};
}

Outcome run_recurrence(const RunConfig& cfg) {
  if (cfg.m < 1) throw Error(ErrorKind::invalid_parameter, "recurrence needs m >= 1");
  const BuildOptions opts = build_options(cfg);
  const DensePolynomial previous = build(cfg.k, cfg.m - 1, opts);
  const DensePolynomial current = extend(previous, opts);
  std::vector<long long> ns;
  if (cfg.n) {
    ns.push_back(*cfg.n);
  } else {
    for (long long n = 0; n <= static_cast<long long>(current.degree()); ++n) ns.push_back(n);
  }
  std::vector<std::pair<std::string, std::function<RecurrenceCheck(long long)>>> forms;
  if (cfg.k == 4) {
    forms.emplace_back("k4", [&](long long n) { return check_recurrence_k4(previous, current, n); });
  }
  forms.emplace_back("general",
                     [&](long long n) { return check_recurrence_general(previous, current, n); });

  json j{{"kind", "recurrence-report"}, {"k", cfg.k}, {"m", cfg.m}, {"tool_version", kToolVersion}};
  std::optional<RecurrenceCheck> failure;
  json forms_json = json::object();
  for (const auto& [name, check] : forms) {
    std::size_t held = 0;
    for (long long n : ns) {
      const RecurrenceCheck r = check(n);
      if (r.holds) {
        ++held;
      } else if (!failure) {
        failure = r;
      }
    }
    forms_json[name] = {{"checked", ns.size()}, {"held", held}};
  }
  j["forms"] = std::move(forms_json);
  j["holds"] = !failure.has_value();
  if (failure) {
    j["witness"] = witness_json(failure->m, failure->n, "lhs", failure->lhs, "rhs", failure->rhs);
    return {std::move(j), kExitRefuted};
  }
  j["witness"] = nullptr;
  return {std::move(j), kExitVerified};
}

Outcome run_audit(const RunConfig& cfg) {
  audit::AuditPlan plan;
  plan.ks = cfg.audit_ks;
  plan.ms = cfg.audit_ms;
  if (cfg.tolerance) plan.quad.abs_tol = *cfg.tolerance;
  const audit::AuditReport report = audit::run_lemma_audit(plan);
  json j = to_json(report);
  const auto failed = std::find_if(report.entries.begin(), report.entries.end(),
                                   [](const audit::AuditEntry& e) { return !e.passed; });
  if (failed == report.entries.end()) {
    j["witness"] = nullptr;
    return {std::move(j), kExitVerified};
  }
  json params = json::object();
  for (const auto& [name, value] : failed->parameters) params[name] = value;
  j["witness"] = {{"check", failed->check},
                  {"parameters", std::move(params)},
                  {"value", failed->value},
                  {"bound", failed->bound}};
  return {std::move(j), kExitRefuted};
}

struct PresetRun {
  int k;
  int m0;
  bool opt_in;
};

constexpr PresetRun kCorollaryPreset[] = {{5, 0, false}, {6, 0, false}, {7, 0, false},
                                          {9, 0, false}, {10, 0, true},  {8, 2, false}};

json resource_estimate(int k, int m0) {
  const int top = std::max(threshold_m_max(k), m0);
  const PolyParams params = PolyParams::make(k, top);
  // Each factor sweeps the live prefix once; summing over levels gives the
  // number of entry additions.
  long double additions = 0;
  for (int m = 0; m <= top; ++m) {
    additions += static_cast<long double>(k - 1) * static_cast<long double>(total_degree(k, m));
  }
  const std::uint64_t bytes = required_storage_bytes(params);
  return {{"k", k},
          {"m0", m0},
          {"threshold_m_max", threshold_m_max(k)},
          {"levels", std::max(0, threshold_m_max(k) - m0)},
          {"N_max", params.N},
          {"entry_bits", params.factor_count() + 1},
          {"peak_storage_bytes", 2 * bytes},
          {"entry_additions", static_cast<double>(additions)}};
}

Outcome run_certify_corollaries(const RunConfig& cfg, std::ostream& err) {
  std::vector<PresetRun> selected;
  json deferred = json::array();
  for (const PresetRun& run : kCorollaryPreset) {
    const bool requested =
        std::find(cfg.only.begin(), cfg.only.end(), run.k) != cfg.only.end();
    if (!cfg.only.empty() && !requested) continue;
    if (run.opt_in && !requested) {
      deferred.push_back({{"k", run.k}, {"m0", run.m0}, {"reason", "opt-in; pass --only 10"}});
      continue;
    }
    selected.push_back(run);
  }
  json estimates = json::array();
  for (const PresetRun& run : selected) {
    const json e = resource_estimate(run.k, run.m0);
    err << "plan: k=" << run.k << " m0=" << run.m0 << " levels=" << e["levels"]
        << " N_max=" << e["N_max"] << " entry_bits=" << e["entry_bits"]
        << " peak_storage_MiB=" << (e["peak_storage_bytes"].get<std::uint64_t>() >> 20)
        << " entry_additions=" << e["entry_additions"] << '\n';
    estimates.push_back(e);
  }
  err.flush();

  std::vector<std::optional<VerificationCertificate>> results(selected.size());
  std::vector<std::exception_ptr> failures(selected.size());
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < selected.size(); i = next++) {
      try {
        VerifyOptions opts = verify_options(cfg);
        const int k = selected[i].k;
        opts.on_level = [&, k](const LevelRecord& level) {
          std::lock_guard lock(log_mutex);
          err << "progress: k=" << k << " m=" << level.window.m
              << (level.window.passed ? " ok" : " FAILED") << '\n';
        };
        results[i] = certify_unimodal_from(k, selected[i].m0, opts);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    const unsigned jobs = std::max(1u, std::min<unsigned>(cfg.jobs, selected.size()));
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  json runs = json::array();
  bool all_verified = true;
  for (const auto& cert : results) {
    runs.push_back(to_json(*cert));
    all_verified = all_verified && cert->status == CertificateStatus::verified;
  }
  json j{{"kind", "corollary-certificates"},
         {"estimates", std::move(estimates)},
         {"runs", std::move(runs)},
         {"deferred", std::move(deferred)},
         {"all_verified", all_verified},
         {"tool_version", kToolVersion}};
  return {std::move(j), all_verified ? kExitVerified : kExitRefuted};
}

void write_report(const RunConfig& cfg, json report, std::ostream& out) {
  report["generated_at"] = utc_timestamp();
  const std::string text = report.dump(2) + "\n";
  if (!cfg.output) {
    out << text;
    return;
  }
  const auto parent = cfg.output->parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream file(*cfg.output, std::ios::binary | std::ios::trunc);
  file << text;
  if (!file) throw Error(ErrorKind::io_error, "cannot write " + cfg.output->string());
  out << "wrote " << cfg.output->string() << '\n';
}

}  // namespace

std::optional<std::uint64_t> parse_memory_size(const std::string& text) {
  std::size_t pos = 0;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
  if (pos == 0 || pos > 18) return std::nullopt;
  std::uint64_t value = std::stoull(text.substr(0, pos));
  std::string suffix;
  for (char c : text.substr(pos)) suffix += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (suffix.ends_with("IB")) {
    suffix.erase(suffix.size() - 2);
  } else if (suffix.size() == 2 && suffix.back() == 'B') {
    suffix.pop_back();
  }
  int shift = 0;
  if (suffix.empty() || suffix == "B") {
    shift = 0;
  } else if (suffix == "K") {
    shift = 10;
  } else if (suffix == "M") {
    shift = 20;
  } else if (suffix == "G") {
    shift = 30;
  } else if (suffix == "T") {
    shift = 40;
  } else {
    return std::nullopt;
  }
  if (shift > 0 && value > (std::numeric_limits<std::uint64_t>::max() >> shift)) return std::nullopt;
  return value << shift;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  std::string checkpoint_dir;
  std::string output;

  CLI::App app{"Exact coefficients and unimodality certificates for k-regular distinct-part "
               "partition polynomials"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--threads", cfg.threads, "Worker threads inside one polynomial build")
        ->check(CLI::PositiveNumber);
    sub->add_option("--memory-limit", cfg.memory_limit_text,
                    "Coefficient storage ceiling, e.g. 512M or 4G (at least 64M)");
    sub->add_option("--output", output, "Write the JSON report here instead of stdout");
  };
  auto add_checkpoint = [&](CLI::App* sub) {
    sub->add_option("--checkpoint-dir", checkpoint_dir,
                    "Checkpoint directory (default: $REGULO_CHECKPOINT_DIR)");
    sub->add_flag("--resume", cfg.resume, "Resume from the checkpoint directory");
  };

  CLI::App* build_cmd = app.add_subcommand("build", "Build D_{k,m} and report its coefficients");
  build_cmd->add_option("--k", cfg.k, "k >= 2")->required();
  build_cmd->add_option("--m", cfg.m, "m >= 0")->required();
  add_common(build_cmd);
  build_cmd->add_option("--checkpoint-dir", checkpoint_dir, "Also save a binary checkpoint here");

  CLI::App* verify_cmd =
      app.add_subcommand("verify", "Certify unimodality of D_{k,m} for all m >= m0 (k >= 5)");
  verify_cmd->add_option("--k", cfg.k, "k >= 5")->required();
  verify_cmd->add_option("--m0", cfg.m0, "First m of the claimed range");
  add_common(verify_cmd);
  add_checkpoint(verify_cmd);

  CLI::App* k4_cmd = app.add_subcommand("k4-profile", "Check the k = 4 exceptional profile");
  k4_cmd->add_option("--m-max", cfg.m_max, "Last m to check")->check(CLI::NonNegativeNumber);
  add_common(k4_cmd);

  CLI::App* oracle_cmd =
      app.add_subcommand("oracle", "Count and list the partitions behind d_{k,m}(n)");
  oracle_cmd->add_option("--k", cfg.k)->required();
  oracle_cmd->add_option("--m", cfg.m)->required();
  oracle_cmd->add_option("--n", cfg.n)->required();
  add_common(oracle_cmd);

  CLI::App* rec_cmd =
      app.add_subcommand("recurrence", "Check d_{k,m} against shifted d_{k,m-1} sums");
  rec_cmd->add_option("--k", cfg.k)->required();
  rec_cmd->add_option("--m", cfg.m, "m >= 1")->required();
  rec_cmd->add_option("--n", cfg.n, "Single n (default: every n in [0, N])");
  add_common(rec_cmd);

  CLI::App* audit_cmd =
      app.add_subcommand("audit", "Numerical spot-check of the growth-bound constants");
  audit_cmd->add_option("--k", cfg.audit_ks, "k values (default 4)");
  audit_cmd->add_option("--m", cfg.audit_ms, "m values, each >= 8k^{3/2} (default 64 70)");
  audit_cmd->add_option("--tolerance", cfg.tolerance, "Per-integral absolute tolerance")
      ->check(CLI::PositiveNumber);
  add_common(audit_cmd);

  CLI::App* cor_cmd = app.add_subcommand(
      "certify-corollaries",
      "Run the preset certificates (5,0) (6,0) (7,0) (9,0) (8,2); (10,0) is opt-in");
  cor_cmd->add_option("--only", cfg.only, "Restrict to these k (repeatable)");
  cor_cmd->add_option("--jobs", cfg.jobs, "Certificates computed concurrently")
      ->check(CLI::PositiveNumber);
  add_common(cor_cmd);
  add_checkpoint(cor_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitVerified;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitVerified;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << '\n';
    return kExitVerified;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitOperational;
  }

  try {
    cfg.subcommand = app.get_subcommands().front()->get_name();
    if (!cfg.memory_limit_text.empty()) {
      const auto limit = parse_memory_size(cfg.memory_limit_text);
      if (!limit) {
        throw Error(ErrorKind::invalid_parameter,
                    "cannot parse --memory-limit '" + cfg.memory_limit_text + "'");
      }
      if (*limit < kMinMemoryLimit) {
        throw Error(ErrorKind::invalid_parameter, "--memory-limit must be at least 64M");
      }
      cfg.memory_limit = *limit;
    }
    if (checkpoint_dir.empty() && cfg.subcommand != "build") {
      if (const char* env = std::getenv("REGULO_CHECKPOINT_DIR"); env && *env) checkpoint_dir = env;
    }
    if (!checkpoint_dir.empty()) cfg.checkpoint_dir = std::filesystem::absolute(checkpoint_dir);
    if (!output.empty()) cfg.output = std::filesystem::absolute(output);
    if (cfg.resume && !cfg.checkpoint_dir) {
      throw Error(ErrorKind::invalid_parameter, "--resume needs --checkpoint-dir");
    }

    Outcome outcome;
    if (cfg.subcommand == "build") {
      outcome = run_build(cfg);
    } else if (cfg.subcommand == "verify") {
      outcome = run_verify(cfg);
    } else if (cfg.subcommand == "k4-profile") {
      outcome = run_k4_profile(cfg);
    } else if (cfg.subcommand == "oracle") {
      outcome = run_oracle(cfg);
    } else if (cfg.subcommand == "recurrence") {
      outcome = run_recurrence(cfg);
    } else if (cfg.subcommand == "audit") {
      outcome = run_audit(cfg);
    } else {
      outcome = run_certify_corollaries(cfg, err);
    }
    write_report(cfg, std::move(outcome.report), out);
    return outcome.exit_code;
  } catch (const Error& e) {
    err << "error: " << to_string(e.kind()) << ": " << e.what() << '\n';
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: io-error: " << e.what() << '\n';
  } catch (const std::bad_alloc&) {
    err << "error: memory-ceiling-exceeded: allocation failed\n";
  }
  return kExitOperational;
}

}  // namespace regulo
