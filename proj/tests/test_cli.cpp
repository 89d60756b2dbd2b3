#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "json.hpp"

#include "regulo/checkpoint.hpp"
#include "regulo/cli.hpp"
#include "regulo/unimodality.hpp"

using namespace regulo;
using nlohmann::json;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;

  json report() const { return json::parse(out); }
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "regulo");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path fresh_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST(Cli, OracleExample) {
  const auto r = run({"oracle", "--k", "4", "--m", "1", "--n", "10"});
  ASSERT_EQ(r.code, kExitVerified) << r.err;
  const auto j = r.report();
  EXPECT_EQ(j["count"], "4");
  EXPECT_EQ(j["partitions"], json::parse("[[7,3],[7,2,1],[6,3,1],[5,3,2]]"));
  EXPECT_TRUE(j["agrees"].get<bool>());
}

TEST(Cli, VerifyFive) {
  const auto r = run({"verify", "--k", "5", "--m0", "0"});
  ASSERT_EQ(r.code, kExitVerified) << r.err;
  const auto j = r.report();
  EXPECT_EQ(j["kind"], "unimodality-certificate");
  EXPECT_EQ(j["status"], "verified");
  EXPECT_EQ(j["threshold_m_max"], 89);
  EXPECT_EQ(j["levels"].size(), 89u);
  EXPECT_TRUE(j.contains("tool_version"));
}

TEST(Cli, RefutationCarriesWitness) {
  const auto r = run({"verify", "--k", "8", "--m0", "0"});
  ASSERT_EQ(r.code, kExitRefuted) << r.err;
  const auto w = r.report()["witness"];
  EXPECT_EQ(w["m"], 1);
  EXPECT_EQ(w["n"], 56);
  EXPECT_EQ(w["d_n_minus_1"], "369");
  EXPECT_EQ(w["d_n"], "368");
}

TEST(Cli, K4Profile) {
  const auto r = run({"k4-profile", "--m-max", "64"});
  ASSERT_EQ(r.code, kExitVerified) << r.err;
  const auto j = r.report();
  EXPECT_TRUE(j["verified"].get<bool>());
  for (const auto& level : j["levels"]) {
    const int m = level["m"];
    if (m >= 1) EXPECT_EQ(level["violations"], json::parse("[4]")) << m;
  }
}

TEST(Cli, Recurrence) {
  const auto r = run({"recurrence", "--k", "4", "--m", "2"});
  ASSERT_EQ(r.code, kExitVerified) << r.err;
  EXPECT_TRUE(r.report()["holds"].get<bool>());
  EXPECT_EQ(r.report()["forms"]["k4"]["checked"], 55);
}

TEST(Cli, BuildWritesCheckpoint) {
  const auto dir = fresh_dir("regulo_cli_build");
  const auto r = run({"build", "--k", "4", "--m", "1", "--checkpoint-dir", dir.string()});
  ASSERT_EQ(r.code, kExitVerified) << r.err;
  const auto j = r.report();
  EXPECT_EQ(j["coefficients"][10], "4");
  EXPECT_EQ(j["coefficient_sum"], "64");
  EXPECT_EQ(load_checkpoint(dir / "D_k4_m1.rpuc"), build(4, 1));
  std::filesystem::remove_all(dir);
}

TEST(Cli, DeterministicApartFromTimestamp) {
  auto a = run({"verify", "--k", "6", "--m0", "0"}).report();
  auto b = run({"verify", "--k", "6", "--m0", "0"}).report();
  a.erase("generated_at");
  b.erase("generated_at");
  EXPECT_EQ(a.dump(), b.dump());
}

TEST(Cli, OutputFile) {
  const auto dir = fresh_dir("regulo_cli_output");
  const auto path = dir / "cert.json";
  const auto r = run({"verify", "--k", "5", "--output", path.string()});
  ASSERT_EQ(r.code, kExitVerified) << r.err;
  std::ifstream in(path);
  EXPECT_EQ(json::parse(in)["status"], "verified");
  std::filesystem::remove_all(dir);
}

TEST(Cli, OperationalErrors) {
  EXPECT_EQ(run({}).code, kExitOperational);
  EXPECT_EQ(run({"frobnicate"}).code, kExitOperational);
  EXPECT_EQ(run({"verify"}).code, kExitOperational);
  EXPECT_EQ(run({"verify", "--k", "4"}).code, kExitOperational);
  EXPECT_EQ(run({"build", "--k", "1", "--m", "0"}).code, kExitOperational);
  EXPECT_EQ(run({"build", "--k", "4", "--m", "1", "--threads", "0"}).code, kExitOperational);
  const auto small = run({"build", "--k", "4", "--m", "1", "--memory-limit", "1M"});
  EXPECT_EQ(small.code, kExitOperational);
  EXPECT_NE(small.err.find("64M"), std::string::npos);
  const auto ceiling = run({"build", "--k", "10", "--m", "252", "--memory-limit", "64M"});
  EXPECT_EQ(ceiling.code, kExitOperational);
  EXPECT_NE(ceiling.err.find("memory-ceiling-exceeded"), std::string::npos);
  EXPECT_EQ(run({"audit", "--k", "4", "--m", "63"}).code, kExitOperational);
}

TEST(Cli, CorruptCheckpointOnResume) {
  const auto dir = fresh_dir("regulo_cli_corrupt");
  ASSERT_EQ(run({"verify", "--k", "5", "--checkpoint-dir", dir.string()}).code, kExitVerified);
  const auto ckpt = certificate_checkpoint_path(dir, 5, 0);
  std::filesystem::resize_file(ckpt, std::filesystem::file_size(ckpt) - 7);
  const auto r = run({"verify", "--k", "5", "--checkpoint-dir", dir.string(), "--resume"});
  EXPECT_EQ(r.code, kExitOperational);
  EXPECT_NE(r.err.find("corrupt-checkpoint"), std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST(Cli, ResumeAfterCompletionReproducesCertificate) {
  const auto dir = fresh_dir("regulo_cli_resume");
  auto first = run({"verify", "--k", "5", "--checkpoint-dir", dir.string()}).report();
  auto second = run({"verify", "--k", "5", "--checkpoint-dir", dir.string(), "--resume"}).report();
  first.erase("generated_at");
  second.erase("generated_at");
  EXPECT_EQ(first.dump(), second.dump());
  std::filesystem::remove_all(dir);
}

TEST(Cli, CorollaryPresetFilters) {
  const auto r = run({"certify-corollaries", "--only", "5"});
  ASSERT_EQ(r.code, kExitVerified) << r.err;
  const auto j = r.report();
  EXPECT_EQ(j["runs"].size(), 1u);
  EXPECT_EQ(j["runs"][0]["k"], 5);
  EXPECT_NE(r.err.find("plan: k=5"), std::string::npos);

  const auto both = run({"certify-corollaries", "--only", "5", "--only", "6", "--jobs", "2"});
  ASSERT_EQ(both.code, kExitVerified) << both.err;
  const auto runs = both.report()["runs"];
  ASSERT_EQ(runs.size(), 2u);
  EXPECT_EQ(runs[1]["k"], 6);
  EXPECT_EQ(runs[1]["threshold_m_max"], 117);
  EXPECT_EQ(runs[1]["status"], "verified");
  EXPECT_TRUE(both.report()["deferred"].empty());
}

TEST(Cli, AuditLabelsEvidence) {
  const auto r = run({"audit", "--k", "4", "--m", "64"});
  ASSERT_EQ(r.code, kExitVerified) << r.err;
  const auto j = r.report();
  EXPECT_EQ(j["kind"], "analytic-audit");
  EXPECT_NE(j["status"].get<std::string>().find("numerical spot-check"), std::string::npos);
  EXPECT_TRUE(j["all_passed"].get<bool>());
}

TEST(Cli, MemorySizeParsing) {
  EXPECT_EQ(parse_memory_size("64M"), std::uint64_t{64} << 20);
  EXPECT_EQ(parse_memory_size("4GiB"), std::uint64_t{4} << 30);
  EXPECT_EQ(parse_memory_size("2g"), std::uint64_t{2} << 30);
  EXPECT_EQ(parse_memory_size("1048576"), std::uint64_t{1} << 20);
  EXPECT_EQ(parse_memory_size("512MB"), std::uint64_t{512} << 20);
  EXPECT_FALSE(parse_memory_size("lots").has_value());
  EXPECT_FALSE(parse_memory_size("12Q").has_value());
}
