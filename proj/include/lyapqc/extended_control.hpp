#pragma once

// Free-evolution / single-shot extension of the bang-bang law. States with
// |a|^2 >= cos^2(theta_max) are exactly the images U(tau)^dagger |e> of the
// target under one bang segment of length tau <= pi/(2 E+), up to the
// relative phase. Such states are phase aligned by free evolution and then
// driven onto |e> by a single control segment.

#include <array>

#include "lyapqc/control_law.hpp"

namespace lyapqc {

/// Relative phase and control time that take cos(g/2)|e> + e^{i phi}sin(g/2)|g>
/// exactly onto |e> under the constant field `field`.
struct PhaseRequirement {
  double phi_star = 0.0;
  double tau_prime = 0.0;
  double field = 0.0;
};

bool reachable_by_single_control(const State& state, const Params& params);

/// Both field-sign branches (+S first, then -S). Their phases differ by pi.
std::array<PhaseRequirement, 2> single_shot_branches(double gamma, const Params& params);

/// The +S branch: tau' = arcsin(sin(g/2)/sin th)/E+ and tan(phi') = cos(E+ t)/(sin(E+ t) cos th).
PhaseRequirement required_phase(double gamma, const Params& params);

/// Shortest free evolution after which the relative phase matches one of the
/// single-shot branches. The relative phase winds at rate omega.
double alignment_wait_time(const State& state, const Params& params);

/// The wait time as the half-rate expression t'' = phi''/(2 omega) with
/// phi'' = arctan(cos(E+ tau')/(sin(E+ tau') cos th)). Kept for comparison.
double half_rate_wait_formula(double gamma, const Params& params);

/// Plan for a phase-aligned, reachable state (wait_time is 0).
SingleShotPlan single_shot(const State& state, const Params& params, double phase_tol = 1e-9);

/// Alignment wait followed by the single shot, from any reachable state.
SingleShotPlan plan_single_shot(const State& state, const Params& params);

/// Extended policy: at a switching event (Im(ab*) = 0) a reachable state is
/// finished with plan_single_shot; everything else follows standard_policy.
Action hybrid_policy(const State& state, const Params& params, const PolicyOptions& opts,
                     bool at_switching_event = false);

}  // namespace lyapqc
