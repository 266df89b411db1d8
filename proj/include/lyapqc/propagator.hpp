#pragma once

// Exact evolution operators exp(-i H t) for H = omega/2 sz + f sx with a
// constant field, and a fixed-step RK4 integrator kept as an independent
// reference for them.

#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <string>

#include "lyapqc/errors.hpp"
#include "lyapqc/qubit.hpp"

namespace lyapqc {

template <typename Scalar>
using Unitary2 = Eigen::Matrix<Complex<Scalar>, 2, 2>;

template <typename Scalar>
using Matrix2c = Eigen::Matrix<Complex<Scalar>, 2, 2>;

template <typename Scalar>
void check_field(const SystemParams<Scalar>& params, Scalar f) {
  using std::abs;
  if (!(abs(f) <= params.s_max())) {
    throw BoundViolation("field " + std::to_string(static_cast<double>(f)) + " exceeds bound S = " +
                         std::to_string(static_cast<double>(params.s_max())));
  }
}

template <typename Scalar>
Matrix2c<Scalar> hamiltonian(const SystemParams<Scalar>& params, Scalar f) {
  Matrix2c<Scalar> h;
  const Scalar half_w = params.omega() / 2;
  h << Complex<Scalar>(half_w), Complex<Scalar>(f), Complex<Scalar>(f), Complex<Scalar>(-half_w);
  return h;
}

/// exp(-i H t) for the constant field f.
///
/// In the dressed frame H = E+ (cos(theta) sz + sin(theta) sx), so
///   u11 = cos(E+ t) - i sin(E+ t) cos(theta)
///   u12 = u21 = -i sin(E+ t) sin(theta)
///   u22 = cos(E+ t) + i sin(E+ t) cos(theta)
/// which is the eigen-decomposition form with E- = -E+.
template <typename Scalar>
Unitary2<Scalar> controlled_unitary(const SystemParams<Scalar>& params, Scalar f, Scalar t) {
  using std::cos;
  using std::sin;
  check_field(params, f);
  if (!(t >= Scalar(0))) throw DomainError("controlled_unitary: duration must be non-negative");
  const auto frame = dressed_frame(params, f);
  const Scalar c = cos(frame.eplus * t);
  const Scalar s = sin(frame.eplus * t);
  const Scalar ct = frame.cos_theta(params.omega());
  const Scalar st = frame.sin_theta();
  Unitary2<Scalar> u;
  u << Complex<Scalar>(c, -s * ct), Complex<Scalar>(0, -s * st),
       Complex<Scalar>(0, -s * st), Complex<Scalar>(c, s * ct);
  return u;
}

/// diag(exp(-i omega t/2), exp(i omega t/2)).
template <typename Scalar>
Unitary2<Scalar> free_unitary(const SystemParams<Scalar>& params, Scalar t) {
  using std::polar;
  if (!(t >= Scalar(0))) throw DomainError("free_unitary: duration must be non-negative");
  const Scalar half = params.omega() * t / 2;
  Unitary2<Scalar> u = Unitary2<Scalar>::Zero();
  u(0, 0) = polar(Scalar(1), -half);
  u(1, 1) = polar(Scalar(1), half);
  return u;
}

template <typename Scalar>
PureState<Scalar> evolve(const PureState<Scalar>& state, const Unitary2<Scalar>& u) {
  return PureState<Scalar>(Amplitudes<Scalar>(u * state.amplitudes()));
}

/// Largest entry of |U^dagger U - I|.
template <typename Scalar>
Scalar unitarity_defect(const Unitary2<Scalar>& u) {
  return (u.adjoint() * u - Unitary2<Scalar>::Identity()).cwiseAbs().maxCoeff();
}

/// Integrates i d|psi>/dt = H |psi> with classical RK4 at fixed step h,
/// renormalising after every step. The last step is shortened to land on t.
template <typename Scalar>
PureState<Scalar> oracle_integrate(const PureState<Scalar>& state, const SystemParams<Scalar>& params,
                                   Scalar f, Scalar t, Scalar h) {
  using std::ceil;
  check_field(params, f);
  if (!(h > Scalar(0))) throw DomainError("oracle_integrate: step must be positive");
  if (!(t >= Scalar(0))) throw DomainError("oracle_integrate: duration must be non-negative");
  if (t == Scalar(0)) return state;

  const Matrix2c<Scalar> gen = Complex<Scalar>(0, -1) * hamiltonian(params, f);
  const auto steps = static_cast<long>(ceil(t / h));
  const Scalar dt = t / static_cast<Scalar>(steps);

  Amplitudes<Scalar> psi = state.amplitudes();
  for (long k = 0; k < steps; ++k) {
    const Amplitudes<Scalar> k1 = gen * psi;
    const Amplitudes<Scalar> k2 = gen * (psi + (dt / 2) * k1);
    const Amplitudes<Scalar> k3 = gen * (psi + (dt / 2) * k2);
    const Amplitudes<Scalar> k4 = gen * (psi + dt * k3);
    psi += (dt / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
    psi.normalize();
  }
  return PureState<Scalar>(psi);
}

/// Default oracle step 1e-4 * (2 pi / omega).
template <typename Scalar>
Scalar default_oracle_step(const SystemParams<Scalar>& params) {
  return Scalar(1e-4) * 2 * std::numbers::pi_v<Scalar> / params.omega();
}

/// Step-doubling wrapper: halves h from the default until two successive
/// results agree within tol (max amplitude difference).
template <typename Scalar>
PureState<Scalar> oracle_integrate_converged(const PureState<Scalar>& state,
                                             const SystemParams<Scalar>& params, Scalar f, Scalar t,
                                             Scalar tol = Scalar(1e-10), int max_halvings = 8) {
  Scalar h = default_oracle_step(params);
  PureState<Scalar> prev = oracle_integrate(state, params, f, t, h);
  for (int i = 0; i < max_halvings; ++i) {
    h /= 2;
    PureState<Scalar> next = oracle_integrate(state, params, f, t, h);
    const Scalar diff = (next.amplitudes() - prev.amplitudes()).cwiseAbs().maxCoeff();
    prev = next;
    if (diff <= tol) break;
  }
  return prev;
}

using Unitary = Unitary2<double>;

}  // namespace lyapqc
