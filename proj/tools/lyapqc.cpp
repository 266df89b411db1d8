// lyapqc: run scenarios, sweeps, steering designs and the randomized self-check.
//
// Exit codes: 0 success, 1 configuration or validation error, 2 truncated
// simulation, 3 verification failure.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>

#include "lyapqc/csv.hpp"
#include "lyapqc/scenario.hpp"
#include "lyapqc/verify.hpp"

namespace fs = std::filesystem;
using namespace lyapqc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitTruncated = 2;
constexpr int kExitVerify = 3;

struct Globals {
  std::string output;
  std::uint64_t seed = 20240601;
  bool quiet = false;
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

void say(const Globals& g, const std::string& line) {
  if (!g.quiet) std::cout << line << '\n';
}

// NaN cells (flagged grid points) are left out of the statistics.
std::string summarize(const Eigen::MatrixXd& table) {
  double lo = 0, hi = 0, sum = 0;
  long n = 0, flagged = 0;
  for (double v : table.reshaped()) {
    if (std::isnan(v)) {
      ++flagged;
      continue;
    }
    lo = n == 0 ? v : std::min(lo, v);
    hi = n == 0 ? v : std::max(hi, v);
    sum += v;
    ++n;
  }
  if (n == 0) return "all cells flagged";
  return "min=" + num(lo) + " max=" + num(hi) + " mean=" + num(sum / static_cast<double>(n)) +
         " flagged=" + std::to_string(flagged);
}

int cmd_simulate(const Globals& g, const std::string& scenario_path) {
  const Scenario sc = load_scenario(scenario_path);
  const Trajectory tr = run(sc.sim);
  const fs::path out = g.output.empty() ? fs::path("trajectory.csv") : fs::path(g.output);
  write_trajectory_csv(out, tr);

  say(g, "fidelity=" + num(tr.terminal_fidelity) + " switches=" + std::to_string(tr.switch_count) +
             " regime=" + std::string(to_string(tr.final_regime)) +
             " stop=" + std::string(to_string(tr.stop)) + " t_end=" + num(tr.end_time) +
             " csv=" + out.string());
  const bool truncated = tr.stop == StopReason::SwitchBudget || tr.stop == StopReason::TimeBudget;
  return truncated ? kExitTruncated : kExitOk;
}

int cmd_sweep(const Globals& g, const std::string& scenario_path) {
  const Scenario sc = load_scenario(scenario_path);
  if (!sc.sweep) throw ConfigError(scenario_path + ": no [sweep] section");
  const SweepSpec& spec = *sc.sweep;
  const fs::path dir = g.output.empty() ? fs::path("sweep_out") : fs::path(g.output);

  SweepResult res;
  switch (spec.kind) {
    case SweepKind::FirstSegment:
      res = sweep_first_segment(spec.grid);
      break;
    case SweepKind::SscFidelity:
      res = sweep_ssc_fidelity(spec.grid, spec.grid.s_values.front(),
                               sc.sim.dt_free * spec.grid.omega);
      break;
    case SweepKind::FidelityVsStrength:
      res = fidelity_vs_strength(spec.grid.s_values, sc.sim.initial, spec.grid.omega,
                                 sc.sim.dt_free * spec.grid.omega);
      break;
    case SweepKind::PhaseAlignment:
      res = phase_alignment_table(spec.grid.gamma_axis,
                                  Params(spec.grid.omega, spec.grid.s_values.front()));
      break;
  }

  // One CSV per table, axes leading.
  for (const auto& [name, table] : res.tables) {
    SweepResult one = res;
    one.tables = {{name, table}};
    const fs::path file = dir / (name + ".csv");
    write_sweep_csv(file, one);
    say(g, name + ": " + summarize(table) + " -> " + file.string());
  }
  for (const auto& [key, value] : res.metadata) say(g, key + "=" + value);
  return kExitOk;
}

int cmd_design(const Globals& g, double gamma0_pi, double omega, int n) {
  const double gamma0 = gamma0_pi * std::numbers::pi;
  const double s = exact_steering_strength(gamma0, omega, n);
  const double fid = simulate_exact_steering(gamma0, omega, n, 1e-6 / omega);
  std::ostringstream os;
  os << "S=" << num(s) << " theta=" << num(std::atan(2 * s / omega)) << " steps=" << n
     << " verified_fidelity=" << num(fid) << '\n';
  if (!g.output.empty()) write_file_atomic(g.output, os.str());
  if (!g.quiet) std::cout << os.str();
  return kExitOk;
}

int cmd_verify(const Globals& g, long count) {
  if (count < 1) throw ConfigError("verify: --count must be at least 1");
  const VerifyReport rep = run_verification(g.seed, static_cast<std::size_t>(count));
  const std::string text = rep.text();
  if (!g.output.empty()) write_file_atomic(g.output, text);
  if (!rep.passed()) {
    std::cerr << text;
    return kExitVerify;
  }
  if (!g.quiet) std::cout << text;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lyapunov bang-bang control of a two-level system"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--output,-o", g.output, "Output file (simulate, design, verify) or directory (sweep)");
  app.add_option("--seed", g.seed, "Seed for randomized runs");
  app.add_flag("--quiet,-q", g.quiet, "Suppress the summary on standard output");

  std::string scenario;
  auto* sim = app.add_subcommand("simulate", "Run one scenario and write its trajectory CSV");
  sim->add_option("scenario", scenario, "Scenario file")->required();

  auto* sweep = app.add_subcommand("sweep", "Run the [sweep] of a scenario, one CSV per table");
  sweep->add_option("scenario", scenario, "Scenario file")->required();

  double gamma0_pi = 0.5, omega = 1.0;
  int n = 1;
  auto* design = app.add_subcommand("design", "Field strength that reaches the target in n steps");
  design->add_option("gamma0", gamma0_pi, "Initial polar angle in units of pi")->required();
  design->add_option("omega", omega, "Transition frequency")->required();
  design->add_option("n", n, "Number of control steps")->required();

  long count = 1000;
  auto* verify = app.add_subcommand("verify", "Randomized propagator and policy self-check");
  verify->add_option("--count", count, "Number of random cases");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*sim) return cmd_simulate(g, scenario);
    if (*sweep) return cmd_sweep(g, scenario);
    if (*design) return cmd_design(g, gamma0_pi, omega, n);
    if (*verify) return cmd_verify(g, count);
  } catch (const std::exception& e) {
    // Bad scenario values, infeasible designs and domain errors all surface here.
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}
