#include "wignerlab/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "gtest/gtest.h"

using namespace wignerlab;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
};

CliRun run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  CliRun r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("wignerlab_cli_" + name)).string();
}

// Runs the echoed command of `first` again and compares every field but the
// timings.
void expect_replays(const CliRun& first) {
  const Json a = parse_report(first.out);
  std::vector<std::string> cmd = a.at("command").get<std::vector<std::string>>();
  const CliRun second = run(cmd);
  ASSERT_EQ(second.code, first.code);
  const Json b = parse_report(second.out);
  std::string where;
  EXPECT_TRUE(numerically_equal(a, b, 1e-12, {"timings"}, &where)) << "mismatch at " << where;
}

class TrialsEnv : public ::testing::Test {
 protected:
  void TearDown() override { unsetenv(kTrialsEnv); }
};

}  // namespace

TEST(cli_classify, ten_three) {
  const CliRun r = run({"classify", "--n", "10", "--k", "3"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Json j = parse_report(r.out);
  EXPECT_EQ(j["results"]["verdict"], "Conclusive");
  EXPECT_EQ(j["results"]["ks"], Json::array({3, 1}));
  EXPECT_EQ(j["tool"], "wignerlab");
  EXPECT_NE(r.out.find("# classify n=10 k=3: Conclusive, ks=[3,1]"), std::string::npos);
}

TEST(cli_classify, eight_three) {
  const CliRun r = run({"classify", "--n", "8", "--k", "3"});
  ASSERT_EQ(r.code, kExitOk);
  const Json j = parse_report(r.out);
  EXPECT_EQ(j["results"]["verdict_detail"], "ReducesToDivisor(2)");
  EXPECT_EQ(j["results"]["k_star"], 2);
}

TEST(cli_exit_codes, precondition_and_usage) {
  EXPECT_EQ(run({"classify", "--n", "3", "--k", "3"}).code, kExitPrecondition);
  EXPECT_EQ(run({"classify", "--n", "3"}).code, kExitPrecondition);
  EXPECT_EQ(run({"frobnicate"}).code, kExitPrecondition);
  EXPECT_EQ(run({}).code, kExitPrecondition);
  EXPECT_EQ(run({"classify", "--n", "ten", "--k", "3"}).code, kExitPrecondition);
  EXPECT_EQ(run({"check", "--map", temp_path("missing.json"), "--k", "1"}).code, kExitPrecondition);
  EXPECT_EQ(run({"search", "--k", "1", "--step", "0"}).code, kExitPrecondition);
  EXPECT_EQ(run({"--help"}).code, kExitOk);
  const CliRun v = run({"--version"});
  EXPECT_EQ(v.code, kExitOk);
  EXPECT_EQ(v.out, std::string(kVersion) + "\n");
}

TEST(cli_exit_codes, malformed_map_file) {
  const std::string path = temp_path("malformed.json");
  {
    std::ofstream os(path);
    os << R"({"format_version": 1, "n": 2, "representation": "hermitian-basis", "matrix": [[1]]})";
  }
  const CliRun r = run({"decompose", "--map", path, "--k", "1"});
  EXPECT_EQ(r.code, kExitPrecondition);
  EXPECT_NE(r.err.find("matrix"), std::string::npos);
  std::filesystem::remove(path);
}

TEST(cli_check, breuer_hall_rank_one) {
  const std::string path = temp_path("bh.json");
  save_map(breuer_hall_map(2, symplectic_unitary(2)), path);
  const CliRun r = run({"check", "--map", path, "--k", "1", "--trials", "40", "--seed", "3"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Json j = parse_report(r.out);
  std::map<std::string, bool> passed;
  for (const auto& c : j["results"]["checks"]) passed[c["name"].get<std::string>()] = c["passed"].get<bool>();
  EXPECT_TRUE(passed.at("is_trace_preserving"));
  EXPECT_TRUE(passed.at("is_positive_sampled"));
  EXPECT_TRUE(passed.at("trace_norm_contraction"));
  EXPECT_FALSE(passed.at("is_invertible"));
  EXPECT_FALSE(passed.at("is_hs_isometry"));
  EXPECT_FALSE(passed.at("preserves_rank_k"));
  EXPECT_FALSE(j["verdicts"]["all_passed"].get<bool>());
  expect_replays(r);
  std::filesystem::remove(path);
}

TEST(cli_check, wigner_map_passes_everything) {
  const std::string path = temp_path("w.json");
  save_map(wigner_map(haar_unitary(4, 8), true), path);
  const CliRun r = run({"check", "--map", path, "--k", "2", "--trials", "30"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(parse_report(r.out)["verdicts"]["all_passed"].get<bool>()) << r.out;
  std::filesystem::remove(path);
}

TEST(cli_decompose, qubit_reduction) {
  const std::string path = temp_path("r1.json");
  save_map(involution_map(1), path);
  const CliRun r = run({"decompose", "--map", path, "--k", "1"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Json j = parse_report(r.out);
  EXPECT_EQ(j["verdicts"]["kind"], "WignerForm");
  EXPECT_EQ(j["results"]["decomposition"]["form"]["transpose"], true);
  EXPECT_EQ(j["results"]["decomposition"]["form"]["reduced"], false);
  expect_replays(r);
  std::filesystem::remove(path);
}

TEST(cli_search, small_run_replays) {
  const CliRun r = run({"search", "--k", "1", "--restarts", "3", "--seed", "5"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Json j = parse_report(r.out);
  EXPECT_EQ(j["results"]["candidates"].size(), 3u);
  EXPECT_EQ(j["verdicts"]["unclassified"], 0);
  expect_replays(r);
}

TEST(cli_demo, runs_and_replays) {
  const CliRun r = run({"demo", "--n", "4", "--k", "2", "--seed", "1", "--trials", "20"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Json j = parse_report(r.out);
  EXPECT_EQ(j["verdicts"]["involution"]["decomposition"], "WignerForm");
  EXPECT_EQ(j["verdicts"]["breuer_hall"]["decomposition"], "NotWignerForm");
  EXPECT_TRUE(j["verdicts"]["wigner"]["checks"]["all_passed"].get<bool>());
  expect_replays(r);
}

TEST_F(TrialsEnv, environment_sets_default_trials) {
  setenv(kTrialsEnv, "7", 1);
  const CliRun r = run({"demo", "--n", "2", "--k", "1", "--seed", "0"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Json j = parse_report(r.out);
  EXPECT_EQ(j["results"]["trials"], 7);
  // The echo pins the resolved value so replays do not depend on the variable.
  unsetenv(kTrialsEnv);
  expect_replays(r);
}

TEST_F(TrialsEnv, invalid_environment_value) {
  setenv(kTrialsEnv, "many", 1);
  EXPECT_EQ(run({"demo", "--n", "2", "--k", "1", "--seed", "0"}).code, kExitPrecondition);
  setenv(kTrialsEnv, "0", 1);
  EXPECT_EQ(run({"demo", "--n", "2", "--k", "1", "--seed", "0"}).code, kExitPrecondition);
}
