#pragma once

// Bang-bang Lyapunov control law for the two-level system: field selection,
// switching-time solver, slow-switching (SSC) step geometry, regime
// classification, exact-steering design and the SSC fidelity bound.

#include <span>
#include <string_view>
#include <vector>

#include "lyapqc/propagator.hpp"
#include "lyapqc/qubit.hpp"

namespace lyapqc {

/// |Im(a b*)| at or below this is treated as zero by the control law.
inline constexpr double kSwitchTolerance = 1e-12;

struct ControlDecision {
  double f = 0.0;
};

enum class Regime { AtTarget, SSC, FSC, Antipodal };

std::string_view to_string(Regime regime);

/// Generic k-control sign rule: f_n = -S sign(T_n), with f_n = 0 when T_n = 0.
std::vector<double> bang_bang_select(std::span<const double> t_values, double s);

/// f = +S when Im(ab*) < 0, -S when > 0, 0 inside the +/- eps_sw band.
ControlDecision select_field(const State& state, const Params& params,
                             double eps_sw = kSwitchTolerance);

/// Im(a b*) after evolving `state` under the constant field f for time t.
double switching_after(const State& state, double f, double t, const Params& params);

/// Smallest t > 0 at which Im(a_t b_t*) vanishes under the constant field f.
/// Lies in (0, pi/(2 E+)].
double segment_duration(const State& state, double f, const Params& params);

/// One slow-switching step from a state on the xz great circle (phi = 0 or pi):
/// a free trigger tick of length dt_free, then the triggered field until the
/// next switching event. The result is gauge fixed.
State ssc_step(const State& state, const Params& params, double dt_free);

Regime classify_regime(const State& state, const Params& params, double eps_target = 1e-12);

/// Field strength that reaches the target exactly in n SSC steps from polar
/// angle gamma0: S = (omega/2) tan(gamma0/(2n)).
double exact_steering_strength(double gamma0, double omega, int n);

/// Fidelity after n SSC steps from (gamma0, phi = 0) at the designed strength.
double simulate_exact_steering(double gamma0, double omega, int n, double dt_free);

/// Lower bound on the fidelity reached by slow-switching control:
/// 1/2 + 1/(2 sqrt(1 + (2S/omega)^2)) = cos^2(theta/2).
double ssc_fidelity_bound(const Params& params);

/// Closed-form coefficient A(gamma0) of the FSC population gain 1 + A dt'^2.
double fsc_gain_coefficient(double gamma0, const Params& params);

/// Leading-order coefficient obtained from conservation of n.r along the
/// control rotation: omega^2 sin^2(gamma0/2) sin(theta) / sin(theta - gamma0).
double fsc_gain_coefficient_leading(double gamma0, const Params& params);

/// 1 + A(gamma0) dt_free^2. Requires 0 < gamma0 < theta_max.
double fsc_population_gain(double gamma0, const Params& params, double dt_free);

/// Closed-form duration of the control that follows a free tick dt_free in
/// the FSC regime: tan(2 E+ dt'') = sin(w dt') / (sin(th) cot(g0) - cos(w dt') cos(th)).
double fsc_control_time(double gamma0, const Params& params, double dt_free);

struct ChatterCycle {
  State state;          // after tick and control
  double field;         // triggered field
  double control_time;  // solved switching time
};

/// One literal FSC chatter cycle: free tick, then control until Im(ab*) = 0.
ChatterCycle fsc_chatter_cycle(const State& state, const Params& params, double dt_free);

/// Knobs shared by the standard and extended policies.
struct PolicyOptions {
  double dt_free = 1e-4;
  double kick_angle = 1e-6;
  double eps_sw = kSwitchTolerance;
};

enum class ActionKind { FreeEvolve, ApplyField, Kick, SingleShot };

struct SingleShotPlan {
  double wait_time = 0.0;
  double field = 0.0;
  double control_time = 0.0;
  double predicted_fidelity = 0.0;
};

struct Action {
  ActionKind kind = ActionKind::FreeEvolve;
  double field = 0.0;
  double duration = 0.0;
  SingleShotPlan plan{};  // SingleShot only
};

/// True when a free tick of length dt_free cannot lift |Im(ab*)| above eps_sw,
/// i.e. the law stalls at (or numerically at) the antipode.
bool needs_kick(const State& state, const Params& params, const PolicyOptions& opts);

/// Symmetry-breaking kick: polar angle reduced by kick_angle, phase set to pi/2.
State apply_kick(const State& state, double kick_angle);

/// Next action of the standard law. `at_switching_event` marks a state that a
/// control segment has just driven onto Im(ab*) = 0.
Action standard_policy(const State& state, const Params& params, const PolicyOptions& opts,
                       bool at_switching_event = false);

}  // namespace lyapqc
