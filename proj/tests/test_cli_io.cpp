#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <sys/wait.h>

#include "lyapqc/csv.hpp"
#include "lyapqc/scenario.hpp"
#include "lyapqc/verify.hpp"

using namespace lyapqc;
namespace fs = std::filesystem;
constexpr double kPi = std::numbers::pi;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "lyapqc_cli_io" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cli(const std::string& args) {
  const std::string cmd = std::string(LYAPQC_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string cli_stdout(const std::string& args) {
  const std::string cmd = std::string(LYAPQC_CLI) + " " + args + " 2>/dev/null";
  std::string out;
  if (FILE* p = popen(cmd.c_str(), "r")) {
    char buf[512];
    while (fgets(buf, sizeof buf, p)) out += buf;
    pclose(p);
  }
  return out;
}

std::string scenario(const std::string& name) {
  return (fs::path(LYAPQC_SCENARIOS) / name).string();
}

void expect_config_error_at_line(const std::string& text, int line) {
  try {
    parse_scenario(text, "t.ini");
    ADD_FAILURE() << "no error for:\n" << text;
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("t.ini:" + std::to_string(line) + ":"), std::string::npos)
        << e.what();
  }
}

}  // namespace

TEST(Scenario, DefaultsFromEmptyText) {
  const Scenario sc = parse_scenario("");
  EXPECT_EQ(sc.sim.params.omega(), 1.0);
  EXPECT_EQ(sc.sim.params.s_max(), 0.1);
  EXPECT_NEAR(sc.sim.initial.gamma(), kPi / 2, 1e-15);
  EXPECT_EQ(sc.sim.policy, Policy::Standard);
  EXPECT_FALSE(sc.sweep.has_value());
}

TEST(Scenario, AnglesInUnitsOfPi) {
  const Scenario sc = parse_scenario(
      "# comment\n[system]\nomega = 2\ns_max = 0.2 ; trailing\n"
      "[initial]\ngamma = 0.25\nphi = 1.75\n[policy]\nkind = extended\n"
      "[simulation]\neps_target = 1e-8\nmax_switches = 77\nstop_at_fsc = true\n");
  EXPECT_EQ(sc.sim.params.omega(), 2.0);
  EXPECT_EQ(sc.sim.params.s_max(), 0.2);
  EXPECT_NEAR(sc.sim.initial.gamma(), kPi / 4, 1e-15);
  EXPECT_NEAR(sc.sim.initial.phi(), 7 * kPi / 4, 1e-15);
  EXPECT_EQ(sc.sim.policy, Policy::Extended);
  EXPECT_EQ(sc.sim.eps_target, 1e-8);
  EXPECT_EQ(sc.sim.max_switches, 77);
  EXPECT_TRUE(sc.sim.stop_at_fsc);
}

TEST(Scenario, SweepSection) {
  const Scenario sc = parse_scenario(
      "[sweep]\nkind = ssc_fidelity\ngamma_count = 7\nphi_count = 4\ns_values = 0.05, 0.1\n");
  ASSERT_TRUE(sc.sweep.has_value());
  EXPECT_EQ(sc.sweep->kind, SweepKind::SscFidelity);
  EXPECT_EQ(sc.sweep->grid.gamma_axis.size(), 7u);
  EXPECT_EQ(sc.sweep->grid.phi_axis.size(), 4u);
  EXPECT_NEAR(sc.sweep->grid.phi_axis[1], kPi / 2, 1e-15);
  EXPECT_EQ(sc.sweep->grid.s_values, (std::vector<double>{0.05, 0.1}));
  EXPECT_EQ(to_string(SweepKind::PhaseAlignment), "phase_alignment");
}

TEST(Scenario, ErrorsCarryLineNumbers) {
  expect_config_error_at_line("[system]\nomega = 1\nbogus = 2\n", 3);
  expect_config_error_at_line("[system]\nomega = 1\nomega = 2\n", 3);
  expect_config_error_at_line("[nowhere]\n", 1);
  expect_config_error_at_line("[system]\nomega = abc\n", 2);
  expect_config_error_at_line("[system]\njust text\n", 2);
  expect_config_error_at_line("[policy]\nkind = sideways\n", 2);
  expect_config_error_at_line("[sweep]\nkind = first_segment\ngamma_count = 0\n", 3);
  EXPECT_THROW(parse_scenario("[system]\nomega = -1\n"), ConfigError);
  EXPECT_THROW(load_scenario("/nonexistent/file.ini"), ConfigError);
}

TEST(Scenario, ShippedFilesParse) {
  for (const auto& entry : fs::directory_iterator(LYAPQC_SCENARIOS)) {
    if (entry.path().extension() != ".ini") continue;
    EXPECT_NO_THROW(load_scenario(entry.path())) << entry.path();
  }
}

TEST(Csv, TrajectoryRoundTrip) {
  SimConfig c = SimConfig::make(Params(1.0, 0.1), Angles(kPi / 2, 7 * kPi / 4), Policy::Extended);
  const Trajectory tr = run(c);
  std::stringstream ss;
  write_trajectory_csv(ss, tr);
  std::string header;
  std::getline(ss, header);
  EXPECT_EQ(header, kTrajectoryHeader);
  ss.seekg(0);
  const auto back = read_trajectory_csv(ss);
  ASSERT_EQ(back.size(), tr.samples.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_NEAR(lyapunov(back[i].state), back[i].v, 1e-12);
    EXPECT_NEAR(back[i].t, tr.samples[i].t, 1e-14 * std::max(1.0, tr.samples[i].t));
    EXPECT_EQ(back[i].kind, tr.samples[i].kind);
    EXPECT_EQ(back[i].f, tr.samples[i].f);
  }
}

TEST(Csv, BadInputRejected) {
  std::istringstream wrong_header("t,x\n");
  EXPECT_THROW(read_trajectory_csv(wrong_header), ConfigError);
  std::istringstream short_row(std::string(kTrajectoryHeader) + "\n0,1,0\n");
  EXPECT_THROW(read_trajectory_csv(short_row), ConfigError);
  std::istringstream bad_kind(std::string(kTrajectoryHeader) + "\n0,1,0,0,0,0,0,0,warp\n");
  EXPECT_THROW(read_trajectory_csv(bad_kind), ConfigError);
}

TEST(Csv, SweepLongFormat) {
  SweepGrid g;
  g.gamma_axis = {0.5, 1.0};
  g.phi_axis = {0.5, 1.5, 2.5};
  g.s_values = {0.1};
  std::stringstream ss;
  write_sweep_csv(ss, sweep_first_segment(g));
  std::string line;
  std::getline(ss, line);
  EXPECT_EQ(line.rfind("gamma,phi,", 0), 0u) << line;
  int rows = 0;
  while (std::getline(ss, line)) ++rows;
  EXPECT_EQ(rows, 6);

  std::stringstream one;
  write_sweep_csv(one, fidelity_vs_strength({0.05, 0.1}, Angles(1.0, 0.0), 1.0));
  std::getline(one, line);
  EXPECT_EQ(line.rfind("s,", 0), 0u) << line;
}

TEST(Csv, AtomicWriteCreatesParents) {
  const fs::path dir = scratch("atomic");
  const fs::path p = dir / "a" / "b" / "out.txt";
  write_file_atomic(p, "hello\n");
  EXPECT_EQ(slurp(p), "hello\n");
  write_file_atomic(p, "again\n");
  EXPECT_EQ(slurp(p), "again\n");
  EXPECT_FALSE(fs::exists(p.string() + ".tmp"));
}

TEST(Verify, DeterministicAndPassing) {
  const auto a = run_verification(7, 50);
  const auto b = run_verification(7, 50);
  EXPECT_TRUE(a.passed()) << a.text();
  EXPECT_EQ(a.text(), b.text());
  EXPECT_EQ(a.count, 50u);
  EXPECT_EQ(a.policy_runs, 5u);
  EXPECT_LT(a.max_propagator_deviation, 1e-8);
  const auto one = run_verification(7, 1);
  EXPECT_EQ(one.count, 1u);
  EXPECT_TRUE(one.passed());
}

TEST(Verify, ImpossibleToleranceReportsInputs) {
  VerifyTolerances tight;
  tight.propagator = 0;
  const auto r = run_verification(3, 5, tight);
  ASSERT_FALSE(r.passed());
  EXPECT_EQ(r.failures.front().check, "propagator");
  EXPECT_FALSE(r.failures.front().inputs.empty());
}

TEST(Cli, SimulateWritesCsvAndIsDeterministic) {
  const fs::path dir = scratch("simulate");
  EXPECT_EQ(cli("--quiet --output " + (dir / "a.csv").string() + " simulate " +
                scenario("extended_run.ini")), 0);
  EXPECT_EQ(cli("--quiet --output " + (dir / "b.csv").string() + " simulate " +
                scenario("extended_run.ini")), 0);
  const std::string a = slurp(dir / "a.csv");
  EXPECT_EQ(a, slurp(dir / "b.csv"));
  std::istringstream in(a);
  const auto samples = read_trajectory_csv(in);
  ASSERT_FALSE(samples.empty());
  EXPECT_GE(fidelity(samples.back().state), 1 - 1e-6);
}

TEST(Cli, ZeroFieldIsTruncated) {
  const fs::path dir = scratch("nofield");
  const fs::path out = dir / "t.csv";
  EXPECT_EQ(cli("-q -o " + out.string() + " simulate " + scenario("no_field.ini")), 2);
  std::ifstream in(out);
  const auto samples = read_trajectory_csv(in);
  ASSERT_FALSE(samples.empty());
  for (const auto& s : samples) EXPECT_NEAR(s.v, samples.front().v, 1e-12);
}

TEST(Cli, SweepWritesTables) {
  const fs::path dir = scratch("sweep");
  const fs::path sc = dir / "small.ini";
  std::ofstream(sc) << "[sweep]\nkind = first_segment\ngamma_count = 5\nphi_count = 4\n";
  EXPECT_EQ(cli("-q -o " + (dir / "out").string() + " sweep " + sc.string()), 0);
  EXPECT_FALSE(fs::is_empty(dir / "out"));
}

TEST(Cli, DesignPrintsStrength) {
  const std::string out = cli_stdout("design 0.5 1 3");
  EXPECT_NE(out.find("0.13397459"), std::string::npos) << out;
  EXPECT_EQ(cli("design 0.5 1 0"), 1);
  EXPECT_EQ(cli("design 0.5 -1 3"), 1);
}

TEST(Cli, ExitCodes) {
  const fs::path dir = scratch("codes");
  EXPECT_EQ(cli("-q verify --count 20"), 0);
  EXPECT_EQ(cli(""), 1);
  EXPECT_EQ(cli("nonsense"), 1);
  EXPECT_EQ(cli("simulate /nonexistent.ini"), 1);
  const fs::path bad = dir / "bad.ini";
  std::ofstream(bad) << "[system]\nomega = 1\nwhat = 3\n";
  EXPECT_EQ(cli("-o " + (dir / "x.csv").string() + " simulate " + bad.string()), 1);
  const fs::path empty = dir / "empty.ini";
  std::ofstream(empty) << "[sweep]\nkind = first_segment\ngamma_count = 0\n";
  EXPECT_EQ(cli("-o " + (dir / "y").string() + " sweep " + empty.string()), 1);
}
