#include "lyapqc/extended_control.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace lyapqc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2 * std::numbers::pi;

// Rounding slack on the reachability boundary |a|^2 = cos^2(theta).
constexpr double kBoundarySlack = 1e-14;

// Accepted fidelity shortfall for a shot whose phase misses a branch.
constexpr double kLandingSlack = 1e-12;

double shot_fidelity(double gamma, double phi, double f, double tau, const Params& params) {
  return fidelity(evolve(from_bloch(Angles(gamma, phi)), controlled_unitary(params, f, tau)));
}

double circular_distance(double a, double b) {
  const double d = Angles::reduce_phase(a - b);
  return std::min(d, kTwoPi - d);
}

}  // namespace

bool reachable_by_single_control(const State& state, const Params& params) {
  const double c = std::cos(params.theta_max());
  return fidelity(state) >= c * c - kBoundarySlack;
}

std::array<PhaseRequirement, 2> single_shot_branches(double gamma, const Params& params) {
  const double s = params.s_max();
  if (!(gamma >= 0 && gamma <= kPi)) throw DomainError("single_shot_branches: gamma outside [0, pi]");
  if (gamma == 0) {
    return {PhaseRequirement{kPi / 2, 0.0, s}, PhaseRequirement{3 * kPi / 2, 0.0, -s}};
  }
  const double sin_th = std::sin(params.theta_max());
  const double ratio = std::sin(gamma / 2) / sin_th;
  if (!(sin_th > 0) || ratio > 1 + kBoundarySlack) {
    throw InfeasibleError("single_shot_branches: gamma = " + std::to_string(gamma) +
                          " is outside the single-control reachable set");
  }
  const auto frame = dressed_frame(params, s);
  const double tau = std::asin(std::min(ratio, 1.0)) / frame.eplus;

  // tan(phi') = cos(E+ tau') / (sin(E+ tau') cos th) fixes phi' only up to pi;
  // resolve quadrant and field sign by propagating each combination.
  const double et = frame.eplus * tau;
  const double candidate =
      std::atan2(std::cos(et), std::sin(et) * frame.cos_theta(params.omega()));

  std::array<PhaseRequirement, 2> out{};
  const std::array<double, 2> fields{s, -s};
  for (std::size_t k = 0; k < 2; ++k) {
    double best_phi = candidate;
    double best_fid = -1;
    for (double phi : {candidate, candidate + kPi}) {
      const double fid = shot_fidelity(gamma, Angles::reduce_phase(phi), fields[k], tau, params);
      if (fid > best_fid) {
        best_fid = fid;
        best_phi = phi;
      }
    }
    if (best_fid < 1 - 1e-9) {
      throw InfeasibleError("single_shot_branches: no phase branch reaches the target");
    }
    out[k] = {Angles::reduce_phase(best_phi), tau, fields[k]};
  }
  return out;
}

PhaseRequirement required_phase(double gamma, const Params& params) {
  return single_shot_branches(gamma, params)[0];
}

double alignment_wait_time(const State& state, const Params& params) {
  if (!reachable_by_single_control(state, params)) {
    throw InfeasibleError("alignment_wait_time: state is not reachable by a single control");
  }
  const auto angles = to_bloch(state);
  double best = kTwoPi / params.omega();
  for (const auto& branch : single_shot_branches(angles.gamma(), params)) {
    double dphi = Angles::reduce_phase(branch.phi_star - angles.phi());
    if (kTwoPi - dphi < 1e-12) dphi = 0;
    best = std::min(best, dphi / params.omega());
  }
  return best;
}

double half_rate_wait_formula(double gamma, const Params& params) {
  const auto req = required_phase(gamma, params);
  const auto frame = dressed_frame(params, params.s_max());
  const double et = frame.eplus * req.tau_prime;
  const double phi2 = std::atan2(std::cos(et), std::sin(et) * frame.cos_theta(params.omega()));
  return phi2 / (2 * params.omega());
}

SingleShotPlan single_shot(const State& state, const Params& params, double phase_tol) {
  if (!reachable_by_single_control(state, params)) {
    throw InfeasibleError("single_shot: state is not reachable by a single control");
  }
  const auto angles = to_bloch(state);
  if (fidelity(state) == 1.0 || angles.gamma() == 0) {
    return {0.0, 0.0, 0.0, fidelity(state)};
  }
  const auto branches = single_shot_branches(angles.gamma(), params);
  // Nearest branch. Near the reachable boundary the phase is ill-conditioned
  // (asin close to 1), so a miss in phase is accepted when the shot still lands.
  const PhaseRequirement* match = &branches[0];
  for (const auto& b : branches) {
    if (circular_distance(angles.phi(), b.phi_star) <
        circular_distance(angles.phi(), match->phi_star)) {
      match = &b;
    }
  }
  double f = select_field(state, params).f;
  if (f == 0 || (f > 0) != (match->field > 0)) f = match->field;
  const double fid =
      fidelity(evolve(state, controlled_unitary(params, f, match->tau_prime)));
  if (circular_distance(angles.phi(), match->phi_star) > phase_tol && 1 - fid > kLandingSlack) {
    throw AlignmentError("single_shot: relative phase " + std::to_string(angles.phi()) +
                         " does not match a single-shot branch");
  }
  return {0.0, f, match->tau_prime, fid};
}

SingleShotPlan plan_single_shot(const State& state, const Params& params) {
  const double wait = alignment_wait_time(state, params);
  const State aligned = evolve(state, free_unitary(params, wait));
  SingleShotPlan plan = single_shot(aligned, params);
  plan.wait_time = wait;
  return plan;
}

Action hybrid_policy(const State& state, const Params& params, const PolicyOptions& opts,
                     bool at_switching_event) {
  const bool on_surface =
      at_switching_event || std::abs(switching_function(state)) <= opts.eps_sw;
  if (on_surface && params.s_max() > 0 && reachable_by_single_control(state, params)) {
    const SingleShotPlan plan = plan_single_shot(state, params);
    return {ActionKind::SingleShot, plan.field, plan.wait_time + plan.control_time, plan};
  }
  return standard_policy(state, params, opts, at_switching_event);
}

}  // namespace lyapqc
