#include "lyapqc/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace lyapqc {

std::string_view to_string(Policy policy) {
  return policy == Policy::Standard ? "standard" : "extended";
}

std::string_view to_string(SegmentKind kind) {
  switch (kind) {
    case SegmentKind::Control: return "Control";
    case SegmentKind::Free: return "Free";
    case SegmentKind::Kick: return "Kick";
  }
  return "?";
}

std::string_view to_string(StopReason reason) {
  switch (reason) {
    case StopReason::Converged: return "converged";
    case StopReason::SwitchBudget: return "switch-budget";
    case StopReason::TimeBudget: return "time-budget";
    case StopReason::FscEntry: return "fsc-entry";
  }
  return "?";
}

std::size_t Trajectory::action_count() const {
  return static_cast<std::size_t>(
      std::count_if(segments.begin(), segments.end(), [](const Segment& s) { return !s.trigger; }));
}

namespace {

Unitary segment_unitary(const Params& params, double field, double dt) {
  return field == 0 ? free_unitary(params, dt) : controlled_unitary(params, field, dt);
}

}  // namespace

State Trajectory::state_at(double t, const Params& params) const {
  if (segments.empty() || t <= segments.front().t_start) return initial;
  auto it = std::upper_bound(segments.begin(), segments.end(), t,
                             [](double v, const Segment& s) { return v < s.t_start; });
  const Segment& seg = *std::prev(it);
  const double dt = t - seg.t_start;
  if (seg.kind == SegmentKind::Kick || dt >= seg.duration) return seg.state_out;
  return evolve(seg.state_in, segment_unitary(params, seg.field, dt));
}

SimConfig SimConfig::make(const Params& params, const Angles& initial, Policy policy) {
  SimConfig c;
  c.params = params;
  c.initial = initial;
  c.policy = policy;
  c.dt_free = 1e-4 / params.omega();
  c.sample_interval = 0.05 / params.omega();
  c.max_time = 1000.0 / params.omega();
  return c;
}

void SimConfig::validate() const {
  if (!(dt_free > 0)) throw ConfigError("dt_free must be positive");
  if (!(kick_angle > 0)) throw ConfigError("kick_angle must be positive");
  if (!(sample_interval > 0)) throw ConfigError("sample_interval must be positive");
  if (!(eps_target > 0 && eps_target < 1)) throw ConfigError("eps_target must lie in (0, 1)");
  if (max_switches < 1) throw ConfigError("max_switches must be at least 1");
  if (!(max_time > 0)) throw ConfigError("max_time must be positive");
}

namespace {

// Boundary samples at every segment start, grid samples k * interval in
// between, and a final sample at the end of the run.
class Recorder {
 public:
  Recorder(Trajectory& tr, const SimConfig& cfg) : tr_(tr), cfg_(cfg) {}

  void segment(const Segment& seg) {
    if (!cfg_.record_samples) return;
    push(seg.t_start, seg.state_in, seg.field, seg.kind);
    if (seg.kind == SegmentKind::Kick) return;
    const double dt = cfg_.sample_interval;
    const double t_end = seg.t_start + seg.duration;
    for (double k = std::floor(seg.t_start / dt) + 1;; k += 1) {
      const double t = k * dt;
      if (t_end - t <= gap(t_end)) break;
      push(t, evolve(seg.state_in, segment_unitary(cfg_.params, seg.field, t - seg.t_start)),
           seg.field, seg.kind);
    }
  }

  void finish(double t, const State& s) {
    if (!cfg_.record_samples) return;
    const double f = tr_.segments.empty() ? 0.0 : tr_.segments.back().field;
    const SegmentKind kind = tr_.segments.empty() ? SegmentKind::Free : tr_.segments.back().kind;
    push(t, s, f, kind);
  }

 private:
  static double gap(double t) { return 1e-12 * std::max(1.0, std::abs(t)); }

  void push(double t, const State& s, double f, SegmentKind kind) {
    if (!tr_.samples.empty() && t - tr_.samples.back().t <= gap(t)) return;
    tr_.samples.push_back({t, s, lyapunov(s), lyapunov_rate(s, f), f, kind});
  }

  Trajectory& tr_;
  const SimConfig& cfg_;
};

}  // namespace

constexpr double kExactHit = 1e-12;

Trajectory run(const SimConfig& cfg) {
  cfg.validate();
  const Params& params = cfg.params;
  const PolicyOptions opts{cfg.dt_free, cfg.kick_angle, kSwitchTolerance};

  Trajectory tr;
  tr.initial = from_bloch(cfg.initial);
  Recorder rec(tr, cfg);
  State s = tr.initial;
  double t = 0.0;

  auto append = [&](SegmentKind kind, double f, double duration, bool trigger) {
    Segment seg;
    seg.kind = kind;
    seg.field = f;
    seg.t_start = t;
    seg.duration = kind == SegmentKind::Kick ? 0.0 : duration;
    seg.state_in = s;
    seg.state_out = kind == SegmentKind::Kick
                        ? apply_kick(s, cfg.kick_angle)
                        : evolve(s, segment_unitary(params, f, seg.duration));
    seg.v_in = lyapunov(seg.state_in);
    seg.v_out = lyapunov(seg.state_out);
    seg.trigger = trigger;
    rec.segment(seg);
    tr.segments.push_back(seg);
    s = seg.state_out;
    t += seg.duration;
    if (kind == SegmentKind::Control) ++tr.switch_count;
  };

  bool at_event = false;
  bool shot_done = false;
  // Under the extended policy a reachable state within eps is still finished
  // by a single shot unless it already sits on the target.
  auto done = [&] {
    const double fid = fidelity(s);
    if (fid < 1 - cfg.eps_target) return false;
    if (cfg.policy == Policy::Standard || shot_done || fid >= 1 - kExactHit) return true;
    return !reachable_by_single_control(s, params);
  };
  while (true) {
    if (done()) {
      tr.stop = StopReason::Converged;
      break;
    }
    if (params.s_max() == 0) {
      if (t < cfg.max_time) append(SegmentKind::Free, 0.0, cfg.max_time - t, false);
      tr.stop = StopReason::TimeBudget;
      break;
    }
    if (tr.switch_count >= cfg.max_switches) {
      tr.stop = StopReason::SwitchBudget;
      break;
    }
    if (t >= cfg.max_time) {
      tr.stop = StopReason::TimeBudget;
      break;
    }
    if (cfg.stop_at_fsc && classify_regime(s, params, cfg.eps_target) == Regime::FSC) {
      tr.stop = StopReason::FscEntry;
      break;
    }

    const Action act = cfg.policy == Policy::Standard
                           ? standard_policy(s, params, opts, at_event)
                           : hybrid_policy(s, params, opts, at_event);
    switch (act.kind) {
      case ActionKind::FreeEvolve:
        append(SegmentKind::Free, 0.0, act.duration, true);
        at_event = false;
        break;
      case ActionKind::ApplyField:
        append(SegmentKind::Control, act.field, act.duration, false);
        at_event = true;
        break;
      case ActionKind::Kick:
        append(SegmentKind::Kick, 0.0, 0.0, false);
        at_event = false;
        break;
      case ActionKind::SingleShot:
        if (act.plan.wait_time > 0) append(SegmentKind::Free, 0.0, act.plan.wait_time, false);
        append(SegmentKind::Control, act.plan.field, act.plan.control_time, false);
        at_event = true;
        shot_done = true;
        break;
    }
  }

  rec.finish(t, s);
  tr.terminal_fidelity = fidelity(s);
  tr.end_time = t;
  tr.final_regime = classify_regime(s, params, cfg.eps_target);
  return tr;
}

Trajectory run_oracle(const SimConfig& cfg, double h) {
  cfg.validate();
  if (!(h > 0) || h > cfg.dt_free / 10 * (1 + 1e-12)) {
    throw ConfigError("run_oracle: step must satisfy 0 < h <= dt_free/10");
  }
  const Params& params = cfg.params;

  Trajectory tr;
  tr.initial = from_bloch(cfg.initial);
  State s = tr.initial;
  double t = 0.0;
  long grid_index = 0;

  auto sample = [&](double f, SegmentKind kind) {
    if (cfg.record_samples) tr.samples.push_back({t, s, lyapunov(s), lyapunov_rate(s, f), f, kind});
  };

  tr.stop = StopReason::TimeBudget;
  while (true) {
    if (fidelity(s) >= 1 - cfg.eps_target) {
      tr.stop = StopReason::Converged;
      break;
    }
    if (tr.switch_count >= cfg.max_switches) {
      tr.stop = StopReason::SwitchBudget;
      break;
    }
    if (t >= cfg.max_time * (1 - 1e-15)) break;

    const double f = select_field(s, params).f;
    const SegmentKind kind = f == 0 ? SegmentKind::Free : SegmentKind::Control;
    if (cfg.record_samples && t >= grid_index * cfg.sample_interval * (1 - 1e-15)) {
      sample(f, kind);
      ++grid_index;
    }

    double step = std::min(h, cfg.max_time - t);
    if (cfg.record_samples) step = std::min(step, grid_index * cfg.sample_interval - t);
    const State next = oracle_integrate(s, params, f, step, step);

    if (!tr.segments.empty() && tr.segments.back().field == f) {
      Segment& seg = tr.segments.back();
      seg.duration += step;
      seg.state_out = next;
      seg.v_out = lyapunov(next);
    } else {
      Segment seg;
      seg.kind = kind;
      seg.field = f;
      seg.t_start = t;
      seg.duration = step;
      seg.state_in = s;
      seg.state_out = next;
      seg.v_in = lyapunov(s);
      seg.v_out = lyapunov(next);
      tr.segments.push_back(seg);
      if (kind == SegmentKind::Control) ++tr.switch_count;
    }
    s = next;
    t += step;
  }

  if (cfg.record_samples && (tr.samples.empty() || t > tr.samples.back().t)) {
    const double f = tr.segments.empty() ? 0.0 : tr.segments.back().field;
    sample(f, tr.segments.empty() ? SegmentKind::Free : tr.segments.back().kind);
  }
  tr.terminal_fidelity = fidelity(s);
  tr.end_time = t;
  tr.final_regime = classify_regime(s, params, cfg.eps_target);
  return tr;
}

}  // namespace lyapqc
