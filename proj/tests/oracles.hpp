#pragma once

// Test-side references that do not go through the library's closed forms:
// matrix exponentials, Bloch-vector geometry and brute-force root scans.

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <random>

#include "lyapqc/trajectory.hpp"

namespace oracle {

using lyapqc::Params;
using lyapqc::State;
using cd = std::complex<double>;

inline Eigen::Matrix2cd expm_propagator(double omega, double f, double t) {
  Eigen::Matrix2cd h;
  h << cd(omega / 2), cd(f), cd(f), cd(-omega / 2);
  const Eigen::Matrix2cd gen = cd(0, -t) * h;
  return gen.exp();
}

inline State expm_evolve(const State& s, double omega, double f, double t) {
  const Eigen::Vector2cd out = expm_propagator(omega, f, t) * s.amplitudes();
  return State(out(0), out(1));
}

inline double max_amp_diff(const State& x, const State& y) {
  return std::max(std::abs(x.a() - y.a()), std::abs(x.b() - y.b()));
}

/// Distance between two rays (global phase ignored).
inline double ray_distance(const State& x, const State& y) {
  const cd overlap = x.a() * std::conj(y.a()) + x.b() * std::conj(y.b());
  const cd phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : cd(1);
  return std::max(std::abs(x.a() - phase * y.a()), std::abs(x.b() - phase * y.b()));
}

inline double polar_angle(const State& s) {
  return 2 * std::atan2(std::abs(s.b()), std::abs(s.a()));
}

inline double im_ab(const State& s) { return std::imag(s.a() * std::conj(s.b())); }

/// First zero of Im(ab*) under constant f by scanning expm in n steps and bisecting.
inline double scan_switch_time(const State& s0, double omega, double f, double t_max,
                               int n = 20000) {
  auto g = [&](double t) { return im_ab(expm_evolve(s0, omega, f, t)); };
  double prev_t = 0, prev = g(t_max / n * 1e-3);
  for (int k = 1; k <= n; ++k) {
    const double t = t_max * k / n;
    const double v = g(t);
    if ((prev < 0) != (v < 0) || v == 0) {
      double lo = prev_t == 0 ? t_max / n * 1e-3 : prev_t, hi = t;
      for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((g(mid) < 0) == (g(lo) < 0)) lo = mid;
        else hi = mid;
      }
      return 0.5 * (lo + hi);
    }
    prev = v;
    prev_t = t;
  }
  return -1;
}

inline State random_state(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0, 1);
  return State(cd(n(rng), n(rng)), cd(n(rng), n(rng)));
}

}  // namespace oracle
