#pragma once

// Event-driven simulation of complete control runs. Segments are constant
// field (or free) intervals whose ends are located from the closed-form
// switching condition; samples are taken on a fixed time grid plus every
// segment boundary.

#include <cstddef>
#include <string_view>
#include <vector>

#include "lyapqc/control_law.hpp"
#include "lyapqc/extended_control.hpp"

namespace lyapqc {

enum class Policy { Standard, Extended };
enum class SegmentKind { Control, Free, Kick };
enum class StopReason { Converged, SwitchBudget, TimeBudget, FscEntry };

std::string_view to_string(Policy policy);
std::string_view to_string(SegmentKind kind);
std::string_view to_string(StopReason reason);

struct Segment {
  SegmentKind kind = SegmentKind::Free;
  double field = 0.0;
  double t_start = 0.0;
  double duration = 0.0;
  State state_in;
  State state_out;
  double v_in = 0.0;
  double v_out = 0.0;
  bool trigger = false;  // infinitesimal free tick that restarts the law
};

struct Sample {
  double t = 0.0;
  State state;
  double v = 0.0;
  double dvdt = 0.0;
  double f = 0.0;
  SegmentKind kind = SegmentKind::Free;
};

struct Trajectory {
  std::vector<Segment> segments;
  std::vector<Sample> samples;
  State initial;
  double terminal_fidelity = 0.0;
  long switch_count = 0;  // control segments
  double end_time = 0.0;
  StopReason stop = StopReason::Converged;
  Regime final_regime = Regime::AtTarget;

  bool converged() const { return stop == StopReason::Converged; }
  State final_state() const { return segments.empty() ? initial : segments.back().state_out; }

  /// Segments excluding trigger ticks: one per control, kick or alignment wait.
  std::size_t action_count() const;

  /// State at time t, evaluated by exact propagation inside its segment.
  State state_at(double t, const Params& params) const;
};

struct SimConfig {
  Params params{1.0, 0.1};
  Angles initial{};
  Policy policy = Policy::Standard;
  double dt_free = 1e-4;
  double kick_angle = 1e-6;
  double sample_interval = 0.05;
  double eps_target = 1e-6;
  long max_switches = 10000;
  double max_time = 1000.0;
  bool stop_at_fsc = false;
  bool record_samples = true;

  /// Defaults with the trigger tick scaled as 1e-4/omega.
  static SimConfig make(const Params& params, const Angles& initial, Policy policy = Policy::Standard);

  void validate() const;
};

Trajectory run(const SimConfig& config);

/// Brute-force reference: fixed RK4 steps of size h with the field re-selected
/// from the sign of Im(ab*) before every step. Requires h <= dt_free / 10.
Trajectory run_oracle(const SimConfig& config, double h);

}  // namespace lyapqc
