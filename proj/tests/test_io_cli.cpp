#include "cli.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace entrosteer {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("entrosteer-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter_++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
  static inline int counter_ = 0;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(ENTROSTEER_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Csv, FormatsWithTwelveSignificantDigits) {
  EXPECT_EQ(io::format_number(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(io::format_number(2.0), "2");
  EXPECT_EQ(io::format_number(-1e-20), "-1e-20");
}

TEST(Csv, RoundTripIsIdentical) {
  Rng rng = stream_for(80, 0);
  std::normal_distribution<double> n(0.0, 3.0);
  for (int k = 0; k < 50; ++k) {
    io::CsvTable t{{"a", "b", "c"}, {}};
    for (int i = 0; i < 40; ++i) t.rows.push_back({double(i), n(rng), std::exp(n(rng) * 5)});
    const std::string text = io::to_csv(t);
    EXPECT_EQ(io::to_csv(io::parse_csv(text)), text);
  }
  const auto recs = survey_fig1(50, Ensemble::Mixed, 81);
  const std::string fig1 = io::to_csv(cli::detail::fig1_table(recs));
  EXPECT_EQ(io::to_csv(io::parse_csv(fig1)), fig1);
}

TEST(Csv, RejectsMalformedRows) {
  EXPECT_THROW(io::parse_csv(std::string("")), io::FormatError);
  EXPECT_THROW(io::parse_csv(std::string("a,b\n1\n")), io::FormatError);
  EXPECT_THROW(io::parse_csv(std::string("a,b\n1,x\n")), io::FormatError);
}

TEST(StateJson, RoundTrip) {
  Rng rng = stream_for(82, 0);
  const auto rho = random_mixed_state(2, 3, rng);
  const auto back = io::state_from_json(io::json::parse(io::state_to_json(rho).dump()));
  EXPECT_EQ(back.dims(), rho.dims());
  EXPECT_LT(max_abs(back.matrix() - rho.matrix()), 1e-15);
}

TEST(StateJson, MalformedInputsAreFormatErrors) {
  const auto bad = {
      R"({"matrix": []})",
      R"({"dims": [2], "matrix": []})",
      R"({"dims": [1, 2], "matrix": [[[1, 0]]]})",
      R"({"dims": [1, 1], "matrix": [[1]]})",
      R"({"dims": [1, 1], "matrix": [[[2, 0]]]})",
      R"({"dims": [1, 2], "matrix": [[[0.5, 0], [0, 0]], [[0, 0], [0.5]]]})",
      R"({"dims": [1, 1], "matrix": [[["a", 0]]]})",
  };
  for (const char* text : bad) EXPECT_THROW(io::state_from_json(io::json::parse(text)), io::FormatError) << text;
  EXPECT_THROW(io::read_state_file("/nonexistent/state.json"), io::FormatError);
}

TEST(Report, JsonKeys) {
  const auto j = io::report_to_json(WitnessReport::lower_bounded("w", Direction::BtoA, 1.0, 2.0));
  EXPECT_EQ(j.at("name"), "w");
  EXPECT_EQ(j.at("direction"), "BtoA");
  EXPECT_EQ(j.at("violation"), 1.0);
  EXPECT_EQ(j.at("units"), "bits");
}

TEST(CliRun, EvalWerner08) {
  TempDir dir;
  const auto state = dir.file("w08.json");
  io::write_state_file(state, werner_state(0.8));
  cli::RunConfig c;
  c.command = "eval";
  c.state_file = state;
  c.witness = "mub-conditional";
  c.out_path = dir.file("report.json");
  cli::run(c);
  const auto j = io::json::parse(slurp(c.out_path));
  EXPECT_EQ(j.at("name"), "mub-conditional");
  EXPECT_NEAR(j.at("violation").get<double>(), 0.5930132192321567, 1e-10);

  c.witness = "all";
  cli::run(c);
  const auto all = io::json::parse(slurp(c.out_path));
  ASSERT_TRUE(all.is_array());
  EXPECT_EQ(all.size(), 5u);
  for (const auto& r : all)
    if (r.at("name") != "sumdiff-discrete") {
      EXPECT_GT(r.at("violation").get<double>(), 0.0) << r.dump();
    }
}

TEST(CliRun, WernerThresholdAndManifest) {
  TempDir dir;
  cli::RunConfig c;
  c.command = "werner-threshold";
  c.settings = 3;
  c.out_path = dir.file("p.json");
  const auto manifest = cli::run(c);
  const auto j = io::json::parse(slurp(c.out_path));
  EXPECT_NEAR(j.at("p_star").get<double>(), 0.6520953371812095, 1e-6);
  const auto m = io::json::parse(slurp(c.out_path + ".manifest.json"));
  for (const char* key : {"command", "seed", "parameters", "versions", "result", "wall_time_s", "timestamp"})
    EXPECT_TRUE(m.contains(key)) << key;
  EXPECT_EQ(m.at("command"), "werner-threshold");
  EXPECT_EQ(manifest.at("result"), m.at("result"));
}

TEST(CliRun, CvScanColumns) {
  TempDir dir;
  cli::RunConfig c;
  c.command = "cv-scan";
  c.r_min = 0.0;
  c.r_max = 1.0;
  c.r_steps = 3;
  c.out_path = dir.file("cv.csv");
  cli::run(c);
  const auto t = io::parse_csv(slurp(c.out_path));
  ASSERT_EQ(t.rows.size(), 3u);
  EXPECT_EQ(t.header[1], "walborn_AtoB");
  EXPECT_NEAR(t.rows[2][1], std::log2(std::cosh(2.0)), 1e-10);
  EXPECT_NEAR(t.rows[1][3], 0.25 - std::exp(-2.0), 1e-10);
}

TEST(CliRun, SweepWithStateFile) {
  TempDir dir;
  const auto state = dir.file("w.json");
  io::write_state_file(state, werner_state(0.9));
  cli::RunConfig c;
  c.command = "sweep";
  c.state_file = state;
  c.n_states = 50;
  c.out_path = dir.file("sweep.csv");
  const auto m = cli::run(c);
  const auto t = io::parse_csv(slurp(c.out_path));
  EXPECT_EQ(t.header, (std::vector<std::string>{"trial_id", "v_AtoB", "v_BtoA"}));
  EXPECT_EQ(t.rows.size(), 50u);
  EXPECT_TRUE(m.at("result").at("candidate").contains("state"));
}

TEST(CliRun, SeparableAuditIsSound) {
  cli::RunConfig c;
  c.command = "separable-audit";
  c.n_states = 300;
  c.out_path = "";
  testing::internal::CaptureStdout();
  const auto m = cli::run(c);
  testing::internal::GetCapturedStdout();
  EXPECT_TRUE(m.at("result").at("sound").get<bool>());
  EXPECT_EQ(m.at("result").at("max_violation_by_witness").size(), 8u);
}

TEST(CliRun, ValidationErrors) {
  cli::RunConfig c;
  c.command = "fig1";
  c.n_states = 0;
  EXPECT_THROW(cli::validate(c), cli::ConfigError);
  c.n_states = 10;
  c.tol = 0;
  EXPECT_THROW(cli::validate(c), cli::ConfigError);
  c = {};
  c.command = "werner-threshold";
  c.settings = 4;
  EXPECT_THROW(cli::validate(c), cli::ConfigError);
  c.settings = 2;
  c.lo = 0.9;
  c.hi = 0.5;
  EXPECT_THROW(cli::validate(c), cli::ConfigError);
  c = {};
  c.command = "eval";
  EXPECT_THROW(cli::validate(c), cli::ConfigError);
  c.command = "plot";
  EXPECT_THROW(cli::validate(c), cli::ConfigError);
}

TEST(CliProcess, ExitCodes) {
  TempDir dir;
  EXPECT_EQ(run_cli("werner-threshold --settings 2 --out " + dir.file("ok.json")), 0);
  EXPECT_EQ(run_cli("werner-threshold --settings 2 --lo 0.8 --hi 0.9 --out " + dir.file("x.json")), 1);
  EXPECT_EQ(run_cli("fig1 --n 0"), 2);
  EXPECT_EQ(run_cli("werner-threshold --settings 5"), 2);
  EXPECT_EQ(run_cli("fig1 --ensemble gibbs"), 2);
  EXPECT_EQ(run_cli("frobnicate"), 2);
  EXPECT_EQ(run_cli("eval --state-file " + dir.file("missing.json")), 2);
  std::ofstream(dir.file("bad.json")) << R"({"dims": [2, 2], "matrix": [[[1, 0]]]})";
  EXPECT_EQ(run_cli("eval --state-file " + dir.file("bad.json")), 2);
}

TEST(CliProcess, Fig1ByteIdenticalAcrossRunsAndThreads) {
  TempDir dir;
  const auto a = dir.file("a.csv"), b = dir.file("b.csv"), c = dir.file("c.csv");
  ASSERT_EQ(run_cli("fig1 --n 2000 --seed 7 --threads 1 --out " + a), 0);
  ASSERT_EQ(run_cli("fig1 --n 2000 --seed 7 --threads 1 --out " + b), 0);
  ASSERT_EQ(run_cli("fig1 --n 2000 --seed 7 --threads 4 --out " + c), 0);
  const auto ta = slurp(a);
  EXPECT_EQ(ta.substr(0, ta.find('\n')), "state_id,v_conditional_AtoB,v_symmetric,purity");
  EXPECT_EQ(ta, slurp(b));
  EXPECT_EQ(ta, slurp(c));
  ASSERT_EQ(run_cli("fig1 --n 2000 --seed 8 --out " + b), 0);
  EXPECT_NE(ta, slurp(b));
}

TEST(CliProcess, SeedFromEnvironment) {
  TempDir dir;
  const auto a = dir.file("a.csv"), b = dir.file("b.csv");
  ASSERT_EQ(run_cli("fig1 --n 100 --seed 9 --out " + a), 0);
  const std::string cmd =
      "ENTROSTEER_SEED=9 " + std::string(ENTROSTEER_CLI) + " fig1 --n 100 --out " + b + " >/dev/null 2>&1";
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  EXPECT_EQ(slurp(a), slurp(b));
  const auto m = io::json::parse(slurp(b + ".manifest.json"));
  EXPECT_EQ(m.at("seed"), 9);
}

}  // namespace
}  // namespace entrosteer
