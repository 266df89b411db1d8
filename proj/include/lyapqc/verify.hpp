#pragma once

// Randomized self-check: analytic propagator against the RK4 oracle, unitarity
// and composition of the closed form, and policy invariants on short runs.
// Everything is driven by one mt19937_64 seed so reports are reproducible.

#include <cstdint>
#include <string>
#include <vector>

namespace lyapqc {

struct VerifyTolerances {
  double propagator = 1e-8;
  double unitarity = 1e-12;
  double composition = 1e-12;
  double lyapunov_increase = 1e-10;
  double extended_fidelity = 1e-6;
};

struct VerifyFailure {
  std::size_t case_index = 0;
  std::string check;
  std::string inputs;  // every value needed to rerun the case
  double deviation = 0.0;
  double tolerance = 0.0;
};

struct VerifyReport {
  std::uint64_t seed = 0;
  std::size_t count = 0;
  std::size_t policy_runs = 0;
  double max_propagator_deviation = 0.0;
  double max_unitarity_defect = 0.0;
  double max_composition_deviation = 0.0;
  double max_lyapunov_increase = 0.0;
  double min_extended_fidelity = 1.0;
  std::vector<VerifyFailure> failures;

  bool passed() const { return failures.empty(); }
  std::string text() const;
};

/// `count` random cases with omega = 1, S = 0.1, f in [-S, S], t in [0, 10].
/// Every tenth case also runs both policies from its state.
VerifyReport run_verification(std::uint64_t seed, std::size_t count,
                              const VerifyTolerances& tol = {});

}  // namespace lyapqc
