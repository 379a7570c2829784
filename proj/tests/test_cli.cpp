#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "copolyap/cli.hpp"

namespace copolyap {
namespace {

namespace fs = std::filesystem;

const std::string kProblems = COPOLYAP_PROBLEMS_DIR;

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "copolyap");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("copolyap_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
    return path(name);
  }

  fs::path dir_;
};

TEST_F(Cli, SynthEx5ThenVerify) {
  const std::string cert = path("cert.json");
  const RunResult s = run_cli({"synth", "--input", kProblems + "/ex5_linear_stable.json", "--method", "disc",
                               "--dmax", "4", "--rmax", "2", "--delta-min", "0.0625", "--out", cert});
  ASSERT_EQ(s.code, cli::kExitOk) << s.err;
  const io::json j = io::read_json_file(cert);
  EXPECT_EQ(j["report"]["overall"], "certified");
  EXPECT_EQ(j["method"], "disc");
  // Round trip: the written certificate verifies unchanged.
  const RunResult v = run_cli({"verify", "--input", kProblems + "/ex5_linear_stable.json", "--cert", cert});
  EXPECT_EQ(v.code, cli::kExitOk) << v.err;
}

TEST_F(Cli, VerifyReferenceCertificate) {
  const RunResult v = run_cli({"verify", "--input", kProblems + "/ex5_linear_stable.json", "--cert",
                               kProblems + "/ex5_reference_v.json", "--out", path("report.json")});
  EXPECT_EQ(v.code, cli::kExitOk);
  EXPECT_NE(v.out.find("overall: certified"), std::string::npos);
  const io::json r = io::read_json_file(path("report.json"));
  EXPECT_EQ(r["h"]["status"], "certified");
  EXPECT_TRUE(r["sampling"].contains("max_derivative"));
}

TEST_F(Cli, VerifyFalsifiedExitsOne) {
  const RunResult v = run_cli({"verify", "--input", kProblems + "/ex2_linear_unstable.json", "--cert",
                               kProblems + "/ex5_reference_v.json"});
  EXPECT_EQ(v.code, cli::kExitNegative);
}

TEST_F(Cli, VerifyUnknownExitsTwo) {
  const std::string problem = write("zero.json", R"({"n": 2, "A": [[0, 0], [0, 0]]})");
  const std::string cert = write("cert.json", R"({"h": {"nvars": 2, "terms": [
      {"exp": [2, 0], "coef": 1}, {"exp": [1, 1], "coef": -1}, {"exp": [0, 2], "coef": 1}]}, "r": 0})");
  const RunResult v =
      run_cli({"verify", "--input", problem, "--cert", cert, "--max-level", "0", "--polya-dmax", "0"});
  EXPECT_EQ(v.code, cli::kExitUnknown) << v.out;
}

TEST_F(Cli, SynthNotFoundExitsOne) {
  const RunResult s = run_cli({"synth", "--input", kProblems + "/ex2_linear_unstable.json", "--dmax", "2",
                               "--rmax", "0", "--delta-min", "0.5"});
  EXPECT_EQ(s.code, cli::kExitNegative);
  EXPECT_NE(s.out.find("not found"), std::string::npos);
}

TEST_F(Cli, SimulateWritesCsv) {
  const std::string csv = path("traj.csv");
  const RunResult r = run_cli({"simulate", "--input", kProblems + "/ex5_linear_stable.json", "--x0", "1,1", "--T",
                               "10", "--dt", "0.001", "--out", csv, "--cert", kProblems + "/ex5_reference_v.json"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  std::ifstream in(csv);
  std::string line;
  std::string last;
  std::getline(in, line);
  EXPECT_EQ(line, "t,x1,x2,eta1,eta2,V");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    last = line;
    ++rows;
  }
  EXPECT_EQ(rows, 10001u);
  std::vector<double> fields;
  std::stringstream ss(last);
  for (std::string item; std::getline(ss, item, ',');) fields.push_back(std::stod(item));
  ASSERT_EQ(fields.size(), 6u);
  EXPECT_LE(std::hypot(fields[1], fields[2]), 1e-2);
}

TEST_F(Cli, Deterministic) {
  for (int k = 0; k < 2; ++k) {
    ASSERT_EQ(run_cli({"synth", "--input", kProblems + "/ex7_linear.json", "--method", "polya", "--rmin", "0",
                       "--dmin", "2", "--dmax", "2", "--out", path("c" + std::to_string(k) + ".json")})
                  .code,
              cli::kExitOk);
    ASSERT_EQ(run_cli({"simulate", "--input", kProblems + "/ex7_linear.json", "--x0", "0.3,0.8", "--T", "1",
                       "--out", path("t" + std::to_string(k) + ".csv")})
                  .code,
              cli::kExitOk);
  }
  EXPECT_EQ(slurp(path("c0.json")), slurp(path("c1.json")));
  EXPECT_EQ(slurp(path("t0.csv")), slurp(path("t1.csv")));
}

TEST_F(Cli, MalformedInputNamesField) {
  const std::string bad_a = write("bad_a.json", R"({"n": 2, "A": [[1, 0], [0]]})");
  RunResult r = run_cli({"verify", "--input", bad_a, "--cert", kProblems + "/ex5_reference_v.json"});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find("A[1]"), std::string::npos) << r.err;

  const std::string bad_coef = write("bad_coef.json", R"({"n": 2, "field": [
      {"nvars": 2, "terms": [{"exp": [1, 0], "coef": -1}]},
      {"nvars": 2, "terms": [{"exp": [0, 1], "coef": "x"}]}]})");
  r = run_cli({"simulate", "--input", bad_coef, "--x0", "1,1", "--T", "1", "--out", path("t.csv")});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find("field[1].terms[0].coef"), std::string::npos) << r.err;

  const std::string no_h = write("no_h.json", R"({"r": 0})");
  r = run_cli({"verify", "--input", kProblems + "/ex5_linear_stable.json", "--cert", no_h});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find("h: missing field"), std::string::npos) << r.err;

  const std::string bad_r = write("bad_r.json", R"({"h": {"nvars": 2, "terms": [{"exp": [1, 1], "coef": 1}]}, "r": 1})");
  r = run_cli({"verify", "--input", kProblems + "/ex5_linear_stable.json", "--cert", bad_r});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find("h:"), std::string::npos) << r.err;

  r = run_cli({"simulate", "--input", kProblems + "/ex5_linear_stable.json", "--x0", "1,abc", "--T", "1", "--out",
               path("t.csv")});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find("x0"), std::string::npos);

  const std::string cone = write("cone.json", R"({"n": 2, "cone": {"type": "lorentz"}, "A": [[1, 0], [0, 1]]})");
  r = run_cli({"verify", "--input", cone, "--cert", kProblems + "/ex5_reference_v.json"});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find("cone.type"), std::string::npos);
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run_cli({}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"synth"}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"synth", "--input", "x.json", "--method", "sdp"}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"verify", "--input", path("missing.json"), "--cert", path("missing.json")}).code,
            cli::kExitUsage);
  EXPECT_EQ(run_cli({"synth", "--input", kProblems + "/ex5_linear_stable.json", "--delta-min", "0.3"}).code,
            cli::kExitUsage);
  const RunResult h = run_cli({"--help"});
  EXPECT_EQ(h.code, cli::kExitOk);
  EXPECT_NE(h.out.find("COPOLYAP_THREADS"), std::string::npos);
}

}  // namespace
}  // namespace copolyap
