#pragma once

// Pure states of a driven two-level system and the scalar functionals
// (fidelity, Lyapunov value, switching function) used by the control law.
//
// Basis ordering is {|e>, |g>}; |e> is the target and the north pole of the
// Bloch sphere. A state is written a|e> + b|g>.

#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "lyapqc/errors.hpp"

namespace lyapqc {

template <typename Scalar>
using Complex = std::complex<Scalar>;

template <typename Scalar>
using Amplitudes = Eigen::Matrix<Complex<Scalar>, 2, 1>;

template <typename Scalar = double>
class PureState {
 public:
  using Cplx = Complex<Scalar>;

  PureState() : amp_(Cplx(1), Cplx(0)) {}

  PureState(const Cplx& a, const Cplx& b) : amp_(a, b) { normalize(); }

  explicit PureState(const Amplitudes<Scalar>& amp) : amp_(amp) { normalize(); }

  static PureState excited() { return PureState(Cplx(1), Cplx(0)); }
  static PureState ground() { return PureState(Cplx(0), Cplx(1)); }

  const Cplx& a() const { return amp_(0); }
  const Cplx& b() const { return amp_(1); }
  const Amplitudes<Scalar>& amplitudes() const { return amp_; }

  Scalar norm_squared() const { return std::norm(amp_(0)) + std::norm(amp_(1)); }

 private:
  void normalize() {
    using std::sqrt;
    const Scalar n2 = norm_squared();
    if (!(n2 > Scalar(0)) || !std::isfinite(static_cast<double>(n2))) {
      throw DomainError("PureState: amplitudes must have finite non-zero norm");
    }
    if (n2 != Scalar(1)) amp_ /= sqrt(n2);
  }

  Amplitudes<Scalar> amp_;
};

/// Polar angle gamma in [0, pi] and relative phase phi in [0, 2 pi).
template <typename Scalar = double>
class BlochAngles {
 public:
  BlochAngles() = default;

  BlochAngles(Scalar gamma, Scalar phi) : gamma_(gamma), phi_(reduce_phase(phi)) {
    if (!(gamma >= Scalar(0) && gamma <= std::numbers::pi_v<Scalar>)) {
      throw DomainError("BlochAngles: gamma must lie in [0, pi], got " +
                        std::to_string(static_cast<double>(gamma)));
    }
  }

  Scalar gamma() const { return gamma_; }
  Scalar phi() const { return phi_; }

  /// Maps any finite phase onto [0, 2 pi).
  static Scalar reduce_phase(Scalar phi) {
    using std::fmod;
    constexpr Scalar two_pi = 2 * std::numbers::pi_v<Scalar>;
    if (!std::isfinite(static_cast<double>(phi))) throw DomainError("BlochAngles: phase must be finite");
    Scalar r = fmod(phi, two_pi);
    if (r < Scalar(0)) r += two_pi;
    if (r >= two_pi) r = Scalar(0);
    return r;
  }

 private:
  Scalar gamma_ = 0;
  Scalar phi_ = 0;
};

/// Level spacing omega (> 0) and field bound S (>= 0).
template <typename Scalar = double>
class SystemParams {
 public:
  SystemParams(Scalar omega, Scalar s_max) : omega_(omega), s_max_(s_max) {
    if (!(omega > Scalar(0)) || !std::isfinite(static_cast<double>(omega))) {
      throw DomainError("SystemParams: omega must be positive");
    }
    if (!(s_max >= Scalar(0)) || !std::isfinite(static_cast<double>(s_max))) {
      throw DomainError("SystemParams: s_max must be non-negative");
    }
  }

  Scalar omega() const { return omega_; }
  Scalar s_max() const { return s_max_; }

  /// Mixing angle of the strongest field, arctan(2S/omega).
  Scalar theta_max() const {
    using std::atan;
    return atan(2 * s_max_ / omega_);
  }

 private:
  Scalar omega_;
  Scalar s_max_;
};

/// Quantities of the Hamiltonian omega/2 sz + f sx for one constant field value.
template <typename Scalar = double>
struct DressedFrame {
  Scalar f;
  Scalar theta;  // arctan(2f/omega), signed with f
  Scalar eplus;  // sqrt(omega^2/4 + f^2)

  Scalar cos_theta(Scalar omega) const { return omega / (2 * eplus); }
  Scalar sin_theta() const { return f / eplus; }
};

template <typename Scalar>
DressedFrame<Scalar> dressed_frame(const SystemParams<Scalar>& params, Scalar f) {
  using std::atan;
  using std::hypot;
  const Scalar w = params.omega();
  return {f, atan(2 * f / w), hypot(w / 2, f)};
}

template <typename Scalar>
PureState<Scalar> from_bloch(const BlochAngles<Scalar>& angles) {
  using std::cos;
  using std::polar;
  using std::sin;
  const Scalar half = angles.gamma() / 2;
  return PureState<Scalar>(Complex<Scalar>(cos(half)), polar(sin(half), angles.phi()));
}

template <typename Scalar>
BlochAngles<Scalar> to_bloch(const PureState<Scalar>& state) {
  using std::abs;
  using std::arg;
  using std::atan2;
  const Scalar ma = abs(state.a());
  const Scalar mb = abs(state.b());
  const Scalar gamma = 2 * atan2(mb, ma);
  // Poles carry no meaningful phase.
  if (mb == Scalar(0) || ma == Scalar(0)) return BlochAngles<Scalar>(gamma, Scalar(0));
  return BlochAngles<Scalar>(gamma, arg(state.b()) - arg(state.a()));
}

/// |<e|psi>|^2.
template <typename Scalar>
Scalar fidelity(const PureState<Scalar>& state) {
  return std::norm(state.a());
}

/// V = <psi|P_g|psi> = |b|^2.
template <typename Scalar>
Scalar lyapunov(const PureState<Scalar>& state) {
  return std::norm(state.b());
}

/// Im(a b*). dV/dt = 2 f Im(a b*).
template <typename Scalar>
Scalar switching_function(const PureState<Scalar>& state) {
  return std::imag(state.a() * std::conj(state.b()));
}

template <typename Scalar>
Scalar lyapunov_rate(const PureState<Scalar>& state, Scalar f) {
  return 2 * f * switching_function(state);
}

/// Removes the global phase so that a is real and non-negative (b when a = 0).
template <typename Scalar>
PureState<Scalar> gauge_fix(const PureState<Scalar>& state) {
  using std::abs;
  using std::conj;
  const auto& a = state.a();
  const auto& b = state.b();
  if (abs(a) > Scalar(0)) {
    const Complex<Scalar> phase = conj(a) / abs(a);
    return PureState<Scalar>(Complex<Scalar>(abs(a)), b * phase);
  }
  return PureState<Scalar>(Complex<Scalar>(0), Complex<Scalar>(abs(b)));
}

using State = PureState<double>;
using Angles = BlochAngles<double>;
using Params = SystemParams<double>;

}  // namespace lyapqc
