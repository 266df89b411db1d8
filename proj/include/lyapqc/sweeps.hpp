#pragma once

// Parameter sweeps over initial states and field strengths. Two-dimensional
// tables are indexed (gamma row, phi column); one-dimensional tables are
// column vectors over the sweep axis.

#include <Eigen/Core>

#include <map>
#include <string>
#include <vector>

#include "lyapqc/trajectory.hpp"

namespace lyapqc {

struct SweepGrid {
  std::vector<double> gamma_axis;
  std::vector<double> phi_axis;
  std::vector<double> s_values;
  double omega = 1.0;

  /// gamma in [0.01, pi - 0.01] (inclusive), phi in [0, 2 pi) (endpoint excluded).
  static SweepGrid uniform(std::size_t n_gamma, std::size_t n_phi, std::vector<double> s_values,
                           double omega = 1.0, double gamma_min = 0.01, double gamma_max = -1.0);

  void validate() const;
};

enum class SweepAxis { GammaPhi, Gamma, Strength };

struct SweepResult {
  SweepGrid grid;
  SweepAxis axis = SweepAxis::GammaPhi;
  std::map<std::string, Eigen::MatrixXd> tables;
  std::map<std::string, std::string> metadata;

  const Eigen::MatrixXd& table(const std::string& name) const { return tables.at(name); }
};

std::vector<double> linspace(double lo, double hi, std::size_t n, bool include_end = true);

/// First control segment from every (gamma0, phi) cell at S = s_values[0]:
/// ratio_a = |a0|^2/|a_tau|^2, ratio_b = |b_tau|^2/|b0|^2, tau, phase_after.
/// Cells on Im(ab*) = 0 (phi = 0, pi) carry NaN.
SweepResult sweep_first_segment(const SweepGrid& grid);

/// Standard law stopped at the first FSC classification, per cell:
/// fidelity and n_max (control segments before FSC entry).
SweepResult sweep_ssc_fidelity(const SweepGrid& grid, double s,
                               double dt_free_scaled = 1e-4);

/// SSC terminal fidelity from one initial state for each S, with the bound.
SweepResult fidelity_vs_strength(const std::vector<double>& s_values, const Angles& initial,
                                 double omega, double dt_free_scaled = 1e-4);

/// Single-shot quantities along gamma: phi_star, tau_prime, wait_time (from
/// phi = 0), wait_time_half_rate, cos2_phi_star, ratio_b (one standard-law
/// segment from the aligned state), shot_fidelity, and ratio_b_at_half_pi
/// (one standard-law segment from phi = pi/2).
SweepResult phase_alignment_table(const std::vector<double>& gammas, const Params& params);

}  // namespace lyapqc
