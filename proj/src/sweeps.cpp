#include "lyapqc/sweeps.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace lyapqc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(15);
  os << v;
  return os.str();
}

void check_increasing(const std::vector<double>& axis, const char* name) {
  for (std::size_t i = 1; i < axis.size(); ++i) {
    if (!(axis[i] > axis[i - 1])) {
      throw ConfigError(std::string("sweep axis '") + name + "' must be strictly increasing");
    }
  }
}

SimConfig ssc_config(const Params& params, const Angles& initial, double dt_free_scaled) {
  SimConfig cfg = SimConfig::make(params, initial, Policy::Standard);
  cfg.dt_free = dt_free_scaled / params.omega();
  cfg.stop_at_fsc = true;
  cfg.record_samples = false;
  cfg.eps_target = 1e-14;
  // Budgets scale with the SSC step count so small S is never truncated.
  const double steps = std::ceil(std::numbers::pi / (2 * params.theta_max())) + 4;
  cfg.max_switches = 4 * static_cast<long>(steps);
  cfg.max_time = cfg.max_switches * (2 * std::numbers::pi / params.omega() + 10 * cfg.dt_free);
  return cfg;
}

}  // namespace

std::vector<double> linspace(double lo, double hi, std::size_t n, bool include_end) {
  std::vector<double> out(n);
  if (n == 0) return out;
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  const double denom = static_cast<double>(include_end ? n - 1 : n);
  for (std::size_t i = 0; i < n; ++i) out[i] = lo + (hi - lo) * static_cast<double>(i) / denom;
  return out;
}

SweepGrid SweepGrid::uniform(std::size_t n_gamma, std::size_t n_phi, std::vector<double> s_values,
                             double omega, double gamma_min, double gamma_max) {
  if (gamma_max < 0) gamma_max = kPi - 0.01;
  SweepGrid g;
  g.gamma_axis = linspace(gamma_min, gamma_max, n_gamma, true);
  g.phi_axis = linspace(0.0, 2 * kPi, n_phi, false);
  g.s_values = std::move(s_values);
  g.omega = omega;
  return g;
}

void SweepGrid::validate() const {
  if (!(omega > 0)) throw ConfigError("sweep grid: omega must be positive");
  check_increasing(gamma_axis, "gamma");
  check_increasing(phi_axis, "phi");
  for (double g : gamma_axis) {
    if (!(g >= 0 && g <= kPi)) throw ConfigError("sweep grid: gamma values must lie in [0, pi]");
  }
  for (double p : phi_axis) {
    if (!(p >= 0 && p < 2 * kPi)) throw ConfigError("sweep grid: phi values must lie in [0, 2 pi)");
  }
  for (double s : s_values) {
    if (!(s >= 0)) throw ConfigError("sweep grid: strengths must be non-negative");
  }
}

SweepResult sweep_first_segment(const SweepGrid& grid) {
  grid.validate();
  if (grid.gamma_axis.empty() || grid.phi_axis.empty()) throw ConfigError("sweep grid is empty");
  if (grid.s_values.empty() || !(grid.s_values.front() > 0)) {
    throw ConfigError("first-segment sweep needs a positive field strength");
  }
  const Params params(grid.omega, grid.s_values.front());
  const auto ng = static_cast<Eigen::Index>(grid.gamma_axis.size());
  const auto np = static_cast<Eigen::Index>(grid.phi_axis.size());

  SweepResult res;
  res.grid = grid;
  res.axis = SweepAxis::GammaPhi;
  Eigen::MatrixXd ratio_a(ng, np), ratio_b(ng, np), tau(ng, np), phase_after(ng, np);

  for (Eigen::Index i = 0; i < ng; ++i) {
    for (Eigen::Index j = 0; j < np; ++j) {
      const State s0 = from_bloch(Angles(grid.gamma_axis[i], grid.phi_axis[j]));
      const double f = select_field(s0, params).f;
      if (f == 0 || std::abs(s0.a()) == 0 || std::abs(s0.b()) == 0) {
        ratio_a(i, j) = ratio_b(i, j) = tau(i, j) = phase_after(i, j) = kNaN;
        continue;
      }
      const double t = segment_duration(s0, f, params);
      const State st = evolve(s0, controlled_unitary(params, f, t));
      ratio_a(i, j) = fidelity(s0) / fidelity(st);
      ratio_b(i, j) = lyapunov(st) / lyapunov(s0);
      tau(i, j) = t;
      phase_after(i, j) = to_bloch(st).phi();
    }
  }
  res.tables["ratio_a"] = std::move(ratio_a);
  res.tables["ratio_b"] = std::move(ratio_b);
  res.tables["tau"] = std::move(tau);
  res.tables["phase_after"] = std::move(phase_after);
  res.metadata["omega"] = fmt(grid.omega);
  res.metadata["s"] = fmt(params.s_max());
  return res;
}

SweepResult sweep_ssc_fidelity(const SweepGrid& grid, double s, double dt_free_scaled) {
  grid.validate();
  if (grid.gamma_axis.empty() || grid.phi_axis.empty()) throw ConfigError("sweep grid is empty");
  if (!(s > 0)) throw ConfigError("sweep_ssc_fidelity: strength must be positive");
  const Params params(grid.omega, s);
  const auto ng = static_cast<Eigen::Index>(grid.gamma_axis.size());
  const auto np = static_cast<Eigen::Index>(grid.phi_axis.size());

  SweepResult res;
  res.grid = grid;
  res.axis = SweepAxis::GammaPhi;
  Eigen::MatrixXd fid(ng, np), n_max(ng, np);
  for (Eigen::Index i = 0; i < ng; ++i) {
    for (Eigen::Index j = 0; j < np; ++j) {
      const auto tr = run(ssc_config(params, Angles(grid.gamma_axis[i], grid.phi_axis[j]),
                                     dt_free_scaled));
      fid(i, j) = tr.terminal_fidelity;
      n_max(i, j) = static_cast<double>(tr.switch_count);
    }
  }
  res.tables["fidelity"] = std::move(fid);
  res.tables["n_max"] = std::move(n_max);
  res.metadata["omega"] = fmt(grid.omega);
  res.metadata["s"] = fmt(s);
  res.metadata["bound"] = fmt(ssc_fidelity_bound(params));
  return res;
}

SweepResult fidelity_vs_strength(const std::vector<double>& s_values, const Angles& initial,
                                 double omega, double dt_free_scaled) {
  if (s_values.empty()) throw ConfigError("fidelity_vs_strength: no strengths given");
  check_increasing(s_values, "s");
  for (double s : s_values) {
    if (!(s > 0)) throw ConfigError("fidelity_vs_strength: strengths must be positive");
  }
  const auto n = static_cast<Eigen::Index>(s_values.size());
  SweepResult res;
  res.grid.s_values = s_values;
  res.grid.omega = omega;
  res.axis = SweepAxis::Strength;
  Eigen::VectorXd fid(n), bound(n), n_max(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Params params(omega, s_values[k]);
    const auto tr = run(ssc_config(params, initial, dt_free_scaled));
    fid(k) = tr.terminal_fidelity;
    n_max(k) = static_cast<double>(tr.switch_count);
    bound(k) = ssc_fidelity_bound(params);
  }
  res.tables["ssc_fidelity"] = fid;
  res.tables["bound"] = bound;
  res.tables["n_max"] = n_max;
  res.metadata["omega"] = fmt(omega);
  res.metadata["gamma0"] = fmt(initial.gamma());
  res.metadata["phi"] = fmt(initial.phi());
  return res;
}

SweepResult phase_alignment_table(const std::vector<double>& gammas, const Params& params) {
  if (gammas.empty()) throw ConfigError("phase_alignment_table: empty gamma axis");
  check_increasing(gammas, "gamma");
  const auto n = static_cast<Eigen::Index>(gammas.size());
  SweepResult res;
  res.grid.gamma_axis = gammas;
  res.grid.s_values = {params.s_max()};
  res.grid.omega = params.omega();
  res.axis = SweepAxis::Gamma;
  Eigen::VectorXd phi_star(n), tau_prime(n), wait(n), wait_half(n), cos2(n), ratio(n), shot(n),
      ratio_half_pi(n);

  auto one_segment_ratio = [&](const State& s0) {
    const double f = select_field(s0, params).f;
    if (f == 0) return kNaN;
    const double t = segment_duration(s0, f, params);
    return lyapunov(evolve(s0, controlled_unitary(params, f, t))) / lyapunov(s0);
  };

  for (Eigen::Index k = 0; k < n; ++k) {
    const double g = gammas[k];
    if (!(g > 0)) throw ConfigError("phase_alignment_table: gamma values must be positive");
    const auto req = required_phase(g, params);
    phi_star(k) = req.phi_star;
    tau_prime(k) = req.tau_prime;
    cos2(k) = std::cos(req.phi_star) * std::cos(req.phi_star);

    const State start = from_bloch(Angles(g, 0.0));
    wait(k) = alignment_wait_time(start, params);
    wait_half(k) = half_rate_wait_formula(g, params);
    shot(k) = plan_single_shot(start, params).predicted_fidelity;

    ratio(k) = one_segment_ratio(from_bloch(Angles(g, req.phi_star)));
    ratio_half_pi(k) = one_segment_ratio(from_bloch(Angles(g, kPi / 2)));
  }
  res.tables["phi_star"] = phi_star;
  res.tables["tau_prime"] = tau_prime;
  res.tables["wait_time"] = wait;
  res.tables["wait_time_half_rate"] = wait_half;
  res.tables["cos2_phi_star"] = cos2;
  res.tables["ratio_b"] = ratio;
  res.tables["shot_fidelity"] = shot;
  res.tables["ratio_b_at_half_pi"] = ratio_half_pi;
  res.metadata["omega"] = fmt(params.omega());
  res.metadata["s"] = fmt(params.s_max());
  return res;
}

}  // namespace lyapqc
