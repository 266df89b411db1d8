#include "lyapqc/control_law.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>

namespace lyapqc {

namespace {

constexpr double kPi = std::numbers::pi;

// Bloch vector components with x + i y = 2 a* b and z = |a|^2 - |b|^2.
struct BlochVector {
  double x, y, z;
};

BlochVector bloch_vector(const State& s) {
  const auto ab = std::conj(s.a()) * s.b();
  return {2 * ab.real(), 2 * ab.imag(), std::norm(s.a()) - std::norm(s.b())};
}

}  // namespace

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::AtTarget: return "AtTarget";
    case Regime::SSC: return "SSC";
    case Regime::FSC: return "FSC";
    case Regime::Antipodal: return "Antipodal";
  }
  return "?";
}

std::vector<double> bang_bang_select(std::span<const double> t_values, double s) {
  if (!(s >= 0)) throw DomainError("bang_bang_select: bound must be non-negative");
  std::vector<double> out;
  out.reserve(t_values.size());
  for (double t : t_values) {
    out.push_back(t > 0 ? -s : (t < 0 ? s : 0.0));
  }
  return out;
}

ControlDecision select_field(const State& state, const Params& params, double eps_sw) {
  const double sw = switching_function(state);
  if (std::abs(sw) <= eps_sw) return {0.0};
  return {sw < 0 ? params.s_max() : -params.s_max()};
}

double switching_after(const State& state, double f, double t, const Params& params) {
  return switching_function(evolve(state, controlled_unitary(params, f, t)));
}

double segment_duration(const State& state, double f, const Params& params) {
  if (f == 0) throw DomainError("segment_duration: zero field never ends a segment");
  check_field(params, f);
  if (std::abs(state.a()) == 0 || std::abs(state.b()) == 0) {
    throw DomainError("segment_duration: degenerate input (state at a pole)");
  }

  // Under a constant field the Bloch vector precesses about
  // n = (sin th, 0, cos th) at rate 2E+, so
  //   y(t) = y0 cos(2E+ t) + (cos th x0 - sin th z0) sin(2E+ t)
  // and Im(a b*) = -y/2.
  const auto frame = dressed_frame(params, f);
  const auto r = bloch_vector(state);
  const double amp_cos = r.y;
  const double amp_sin = frame.cos_theta(params.omega()) * r.x - frame.sin_theta() * r.z;
  if (amp_cos == 0 && amp_sin == 0) {
    throw DomainError("segment_duration: state is stationary under this field");
  }

  // Smallest positive root of amp_cos cos(u) + amp_sin sin(u), u in (0, pi].
  double u = kPi / 2;
  if (amp_sin != 0) {
    u = std::atan(-amp_cos / amp_sin);
    if (u <= 0) u += kPi;
  }
  double tau = u / (2 * frame.eplus);

  // Polish against the propagated switching function.
  auto g = [&](double t) { return switching_after(state, f, t, params); };
  const double width = std::max(1e-9 * tau, 1e-12 / frame.eplus);
  const double lo = std::max(tau - width, 0.5 * tau);
  const double hi = tau + width;
  const double g_lo = g(lo);
  const double g_hi = g(hi);
  if ((g_lo < 0 && g_hi > 0) || (g_lo > 0 && g_hi < 0)) {
    std::uintmax_t max_iter = 100;
    const auto bracket = boost::math::tools::toms748_solve(
        g, lo, hi, g_lo, g_hi, boost::math::tools::eps_tolerance<double>(50), max_iter);
    tau = 0.5 * (bracket.first + bracket.second);
  }
  return tau;
}

State ssc_step(const State& state, const Params& params, double dt_free) {
  if (!(dt_free > 0)) throw DomainError("ssc_step: trigger tick must be positive");
  const auto angles = to_bloch(state);
  if (angles.gamma() <= params.theta_max()) {
    throw RegimeError("ssc_step: polar angle " + std::to_string(angles.gamma()) +
                      " is inside the fast-switching regime");
  }
  if (std::abs(switching_function(state)) > 1e-9) {
    throw DomainError("ssc_step: state must lie on the phi = 0 / pi great circle");
  }
  const State ticked = evolve(state, free_unitary(params, dt_free));
  const double f = select_field(ticked, params).f;
  if (f == 0) throw RegimeError("ssc_step: trigger tick did not produce a switching signal");
  const double tau = segment_duration(ticked, f, params);
  return gauge_fix(evolve(ticked, controlled_unitary(params, f, tau)));
}

Regime classify_regime(const State& state, const Params& params, double eps_target) {
  const double fid = fidelity(state);
  if (fid >= 1 - eps_target) return Regime::AtTarget;
  if (fid <= eps_target) return Regime::Antipodal;
  const double gamma = to_bloch(state).gamma();
  if (gamma > 0 && gamma <= params.theta_max()) return Regime::FSC;
  return Regime::SSC;
}

double exact_steering_strength(double gamma0, double omega, int n) {
  if (n < 1) throw DomainError("exact_steering_strength: n must be at least 1");
  if (!(omega > 0)) throw DomainError("exact_steering_strength: omega must be positive");
  if (!(gamma0 > 0 && gamma0 <= kPi)) {
    throw DomainError("exact_steering_strength: gamma0 must lie in (0, pi]");
  }
  const double half_angle = gamma0 / (2.0 * n);
  if (half_angle >= kPi / 2) throw InfeasibleError("exact_steering_strength: gamma0/(2n) >= pi/2");
  return 0.5 * omega * std::tan(half_angle);
}

double simulate_exact_steering(double gamma0, double omega, int n, double dt_free) {
  const Params params(omega, exact_steering_strength(gamma0, omega, n));
  State state = from_bloch(Angles(gamma0, 0.0));
  for (int k = 0; k < n; ++k) {
    if (to_bloch(state).gamma() <= params.theta_max()) break;
    state = ssc_step(state, params, dt_free);
  }
  return fidelity(state);
}

double ssc_fidelity_bound(const Params& params) {
  const double r = 2 * params.s_max() / params.omega();
  return 0.5 + 0.5 / std::sqrt(1 + r * r);
}

namespace {

void check_fsc_angle(double gamma0, const Params& params) {
  const double theta = params.theta_max();
  if (!(gamma0 > 0 && gamma0 < theta)) {
    throw RegimeError("FSC formulas need 0 < gamma0 < theta_max = " + std::to_string(theta));
  }
}

}  // namespace

double fsc_gain_coefficient(double gamma0, const Params& params) {
  check_fsc_angle(gamma0, params);
  const double th = params.theta_max();
  const double w = params.omega();
  const double s_half = std::sin(gamma0 / 2);
  const double d = std::sin(th - gamma0);
  return w * w * s_half * s_half * std::sin(th) * (d + std::sin(gamma0) / 2) / (d * d);
}

double fsc_gain_coefficient_leading(double gamma0, const Params& params) {
  check_fsc_angle(gamma0, params);
  const double th = params.theta_max();
  const double w = params.omega();
  const double s_half = std::sin(gamma0 / 2);
  return w * w * s_half * s_half * std::sin(th) / std::sin(th - gamma0);
}

double fsc_population_gain(double gamma0, const Params& params, double dt_free) {
  if (!(dt_free >= 0)) throw DomainError("fsc_population_gain: tick must be non-negative");
  return 1 + fsc_gain_coefficient(gamma0, params) * dt_free * dt_free;
}

double fsc_control_time(double gamma0, const Params& params, double dt_free) {
  check_fsc_angle(gamma0, params);
  const double th = params.theta_max();
  const double wt = params.omega() * dt_free;
  const auto frame = dressed_frame(params, params.s_max());
  const double num = std::sin(wt);
  const double den = std::sin(th) / std::tan(gamma0) - std::cos(wt) * std::cos(th);
  return std::atan2(num, den) / (2 * frame.eplus);
}

ChatterCycle fsc_chatter_cycle(const State& state, const Params& params, double dt_free) {
  if (!(dt_free > 0)) throw DomainError("fsc_chatter_cycle: tick must be positive");
  const State ticked = evolve(state, free_unitary(params, dt_free));
  const double f = select_field(ticked, params).f;
  if (f == 0) throw RegimeError("fsc_chatter_cycle: trigger tick did not produce a switching signal");
  const double tau = segment_duration(ticked, f, params);
  return {gauge_fix(evolve(ticked, controlled_unitary(params, f, tau))), f, tau};
}

bool needs_kick(const State& state, const Params& params, const PolicyOptions& opts) {
  // Only the southern stall point; near the target a small |b| is progress.
  if (std::abs(state.a()) >= std::abs(state.b())) return false;
  const double lifted =
      std::abs(state.a()) * std::abs(state.b()) * std::abs(std::sin(params.omega() * opts.dt_free));
  return lifted <= opts.eps_sw;
}

State apply_kick(const State& state, double kick_angle) {
  const double gamma = std::max(to_bloch(state).gamma() - kick_angle, 0.0);
  return from_bloch(Angles(gamma, kPi / 2));
}

Action standard_policy(const State& state, const Params& params, const PolicyOptions& opts,
                       bool at_switching_event) {
  const bool on_surface =
      at_switching_event || std::abs(switching_function(state)) <= opts.eps_sw;
  if (on_surface || params.s_max() == 0) {
    if (params.s_max() > 0 && needs_kick(state, params, opts)) {
      return {ActionKind::Kick, 0.0, 0.0, {}};
    }
    return {ActionKind::FreeEvolve, 0.0, opts.dt_free, {}};
  }
  const double f = select_field(state, params, opts.eps_sw).f;
  return {ActionKind::ApplyField, f, segment_duration(state, f, params), {}};
}

}  // namespace lyapqc
