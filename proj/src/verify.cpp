#include "lyapqc/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>

#include "lyapqc/trajectory.hpp"

namespace lyapqc {

namespace {

std::string exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

double max_abs_diff(const State& x, const State& y) {
  return std::max(std::abs(x.a() - y.a()), std::abs(x.b() - y.b()));
}

}  // namespace

std::string VerifyReport::text() const {
  std::ostringstream os;
  os << "seed " << seed << ", cases " << count << ", policy runs " << policy_runs << '\n';
  os << "max propagator deviation   " << sci(max_propagator_deviation) << '\n';
  os << "max unitarity defect       " << sci(max_unitarity_defect) << '\n';
  os << "max composition deviation  " << sci(max_composition_deviation) << '\n';
  os << "max V increase (standard)  " << sci(max_lyapunov_increase) << '\n';
  os << "min fidelity (extended)    " << sci(min_extended_fidelity) << '\n';
  for (const auto& f : failures) {
    os << "FAIL case " << f.case_index << " [" << f.check << "] deviation " << sci(f.deviation)
       << " > " << sci(f.tolerance) << ": " << f.inputs << '\n';
  }
  os << (passed() ? "verify: ok" : "verify: FAILED") << '\n';
  return os.str();
}

VerifyReport run_verification(std::uint64_t seed, std::size_t count, const VerifyTolerances& tol) {
  VerifyReport rep;
  rep.seed = seed;
  rep.count = count;

  const Params params(1.0, 0.1);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  for (std::size_t i = 0; i < count; ++i) {
    // Uniform on the sphere: cos(gamma) uniform in [-1, 1].
    const double gamma = std::acos(1 - 2 * unit(rng));
    const double phi = 2 * std::numbers::pi * unit(rng);
    const double f = params.s_max() * (2 * unit(rng) - 1);
    const double t = 10 * unit(rng);
    const double split = unit(rng);

    const std::string inputs = "omega=1 s_max=0.1 gamma=" + exact(gamma) + " phi=" + exact(phi) +
                               " f=" + exact(f) + " t=" + exact(t) + " split=" + exact(split);
    auto check = [&](const char* name, double dev, double limit, double& worst) {
      worst = std::max(worst, dev);
      if (!(dev <= limit)) rep.failures.push_back({i, name, inputs, dev, limit});
    };

    const State s0 = from_bloch(Angles(gamma, phi));
    const Unitary u = controlled_unitary(params, f, t);
    const State analytic = evolve(s0, u);
    const State oracle = oracle_integrate(s0, params, f, t, default_oracle_step(params));
    check("propagator", max_abs_diff(analytic, oracle), tol.propagator,
          rep.max_propagator_deviation);
    check("unitarity", unitarity_defect(u), tol.unitarity, rep.max_unitarity_defect);

    const Unitary composed =
        controlled_unitary(params, f, (1 - split) * t) * controlled_unitary(params, f, split * t);
    check("composition", (composed - u).cwiseAbs().maxCoeff(), tol.composition,
          rep.max_composition_deviation);

    if (i % 10 != 0) continue;
    ++rep.policy_runs;

    SimConfig cfg = SimConfig::make(params, Angles(gamma, phi), Policy::Standard);
    cfg.record_samples = false;
    cfg.max_switches = 200;
    const Trajectory std_run = run(cfg);
    double increase = 0.0;
    for (const auto& seg : std_run.segments) increase = std::max(increase, seg.v_out - seg.v_in);
    check("standard V monotone", increase, tol.lyapunov_increase, rep.max_lyapunov_increase);

    cfg.policy = Policy::Extended;
    const Trajectory ext_run = run(cfg);
    rep.min_extended_fidelity = std::min(rep.min_extended_fidelity, ext_run.terminal_fidelity);
    const double shortfall = 1 - ext_run.terminal_fidelity;
    if (!(shortfall <= tol.extended_fidelity)) {
      rep.failures.push_back({i, "extended convergence", inputs, shortfall, tol.extended_fidelity});
    }
  }
  return rep;
}

}  // namespace lyapqc
