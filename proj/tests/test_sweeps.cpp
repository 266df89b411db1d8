#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lyapqc/sweeps.hpp"
#include "oracles.hpp"

using namespace lyapqc;
constexpr double kPi = std::numbers::pi;

namespace {
const Params kP(1.0, 0.1);
const double kTheta = std::atan(0.2);
const double kEplus = std::hypot(0.5, 0.1);
}  // namespace

TEST(Linspace, Endpoints) {
  const auto a = linspace(0, 1, 5);
  EXPECT_EQ(a.front(), 0);
  EXPECT_EQ(a.back(), 1);
  const auto b = linspace(0, 2 * kPi, 4, false);
  EXPECT_NEAR(b.back(), 1.5 * kPi, 1e-15);
  EXPECT_TRUE(linspace(0, 1, 0).empty());
  EXPECT_EQ(linspace(0.3, 1, 1).front(), 0.3);
}

TEST(SweepGrid, DefaultsAndValidation) {
  const auto g = SweepGrid::uniform(101, 101, {0.1});
  EXPECT_EQ(g.gamma_axis.size(), 101u);
  EXPECT_NEAR(g.gamma_axis.front(), 0.01, 1e-15);
  EXPECT_NEAR(g.gamma_axis.back(), kPi - 0.01, 1e-15);
  EXPECT_EQ(g.phi_axis.front(), 0);
  EXPECT_LT(g.phi_axis.back(), 2 * kPi);
  EXPECT_NO_THROW(g.validate());

  SweepGrid bad = g;
  bad.gamma_axis = {0.5, 0.4};
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = g;
  bad.phi_axis = {0.0, 2 * kPi};
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = g;
  bad.omega = 0;
  EXPECT_THROW(bad.validate(), ConfigError);
  EXPECT_THROW(sweep_first_segment(SweepGrid::uniform(0, 5, {0.1})), ConfigError);
  EXPECT_THROW(sweep_first_segment(SweepGrid::uniform(5, 5, {0.0})), ConfigError);
}

TEST(FirstSegment, RatiosBoundedAndDurationsFinite) {
  const auto res = sweep_first_segment(SweepGrid::uniform(41, 40, {0.1}));
  const auto& ra = res.table("ratio_a");
  const auto& rb = res.table("ratio_b");
  const auto& tau = res.table("tau");
  int flagged = 0;
  for (Eigen::Index i = 0; i < ra.rows(); ++i) {
    for (Eigen::Index j = 0; j < ra.cols(); ++j) {
      if (std::isnan(ra(i, j))) {
        ++flagged;
        const double phi = res.grid.phi_axis[j];
        EXPECT_TRUE(phi == 0 || std::abs(phi - kPi) < 1e-12);
        continue;
      }
      EXPECT_LE(ra(i, j), 1 + 1e-12);
      EXPECT_LE(rb(i, j), 1 + 1e-12);
      EXPECT_GE(rb(i, j), 0);
      EXPECT_TRUE(std::isfinite(tau(i, j)));
      EXPECT_GT(tau(i, j), 0);
      EXPECT_LE(tau(i, j), kPi / kEplus * (1 + 1e-12));
    }
  }
  EXPECT_EQ(flagged, 2 * 41);
}

TEST(FirstSegment, CellMatchesExpmAndScan) {
  SweepGrid g;
  g.gamma_axis = {0.7};
  g.phi_axis = {2.2};
  g.s_values = {0.1};
  const auto res = sweep_first_segment(g);
  const State s0 = from_bloch(Angles(0.7, 2.2));
  const double f = 0.1;  // Im(ab*) < 0 for phi in (0, pi)
  const double t = oracle::scan_switch_time(s0, 1.0, f, kPi / kEplus);
  const State st = oracle::expm_evolve(s0, 1.0, f, t);
  EXPECT_NEAR(res.table("tau")(0, 0), t, 1e-9);
  EXPECT_NEAR(res.table("ratio_b")(0, 0), lyapunov(st) / lyapunov(s0), 1e-9);
  EXPECT_NEAR(res.table("ratio_a")(0, 0), fidelity(s0) / fidelity(st), 1e-9);
}

TEST(FirstSegment, ZeroLocusExists) {
  // States on the single-shot branch are sent straight to the target.
  SweepGrid g;
  g.gamma_axis = {0.05, 0.2, 0.35};
  g.s_values = {0.1};
  for (double gamma : g.gamma_axis) g.phi_axis.push_back(required_phase(gamma, kP).phi_star);
  std::sort(g.phi_axis.begin(), g.phi_axis.end());
  const auto res = sweep_first_segment(g);
  for (Eigen::Index i = 0; i < 3; ++i) {
    const auto phi_star = required_phase(g.gamma_axis[i], kP).phi_star;
    const auto j = std::find(g.phi_axis.begin(), g.phi_axis.end(), phi_star) - g.phi_axis.begin();
    EXPECT_LT(res.table("ratio_b")(i, j), 1e-12);
  }
}

TEST(FirstSegment, SmallAngleRowApproachesZeroNearHalfPi) {
  SweepGrid g;
  g.gamma_axis = {1e-4, 1e-3, 1e-2};
  g.phi_axis = {kPi / 2};
  g.s_values = {0.1};
  const auto rb = sweep_first_segment(g).table("ratio_b");
  EXPECT_LT(rb(0, 0), rb(1, 0));
  EXPECT_LT(rb(1, 0), rb(2, 0));
  EXPECT_LT(rb(0, 0), 1e-5);
}

TEST(SscFidelity, BoundAndDominance) {
  const auto grid = SweepGrid::uniform(30, 30, {});
  const auto r10 = sweep_ssc_fidelity(grid, 0.1);
  const auto r05 = sweep_ssc_fidelity(grid, 0.05);
  EXPECT_GE(r10.table("fidelity").minCoeff(), ssc_fidelity_bound(kP) - 1e-9);
  EXPECT_GE(r05.table("fidelity").minCoeff(), ssc_fidelity_bound(Params(1.0, 0.05)) - 1e-9);
  EXPECT_GT(r05.table("fidelity").minCoeff(), r10.table("fidelity").minCoeff());
  EXPECT_GT(r10.table("fidelity").maxCoeff(), 1 - 1e-4);
  EXPECT_THROW(sweep_ssc_fidelity(grid, 0.0), ConfigError);
  EXPECT_GE(r10.table("n_max").maxCoeff(), std::floor((kPi - 0.01) / (2 * kTheta)) - 1);
}

TEST(FidelityVsStrength, AboveBoundAndTendsToOne) {
  const std::vector<double> s{0.001, 0.01, 0.05, 0.1, 0.2, 0.3};
  const auto res = fidelity_vs_strength(s, Angles(kPi / 2, 0.0), 1.0);
  const auto& fid = res.table("ssc_fidelity");
  const auto& bound = res.table("bound");
  EXPECT_NEAR(bound(3), 0.990290, 1e-6);
  for (Eigen::Index k = 0; k < fid.rows(); ++k) EXPECT_GE(fid(k), bound(k) - 1e-9);
  EXPECT_GT(fid(0), 1 - 1e-5);
  EXPECT_GT(bound(0), 1 - 1e-5);
  EXPECT_THROW(fidelity_vs_strength({}, Angles(1.0, 0.0), 1.0), ConfigError);
  EXPECT_THROW(fidelity_vs_strength({0.2, 0.1}, Angles(1.0, 0.0), 1.0), ConfigError);
}

TEST(PhaseAlignment, TableRows) {
  const auto gam = linspace(1e-3, 2 * kTheta * (1 - 1e-6), 25);
  const auto res = phase_alignment_table(gam, kP);
  // First-order offset from pi/2 is gamma cot(theta) / 2.
  EXPECT_NEAR(res.table("phi_star")(0), kPi / 2 - 1e-3 / (2 * std::tan(kTheta)), 1e-5);
  for (Eigen::Index k = 0; k < res.table("shot_fidelity").rows(); ++k) {
    EXPECT_GE(res.table("shot_fidelity")(k), 1 - 1e-9);
    EXPECT_LT(res.table("ratio_b")(k), 1e-12);
  }
  EXPECT_THROW(phase_alignment_table({}, kP), ConfigError);
  EXPECT_THROW(phase_alignment_table({0.5, 0.4}, kP), ConfigError);
}

TEST(PhaseAlignment, RatioAtHalfPiApproachesCosineSquaredLaw) {
  // Away from the exact branch the one-segment ratio follows cos^2(phi)
  // with an error that shrinks linearly in gamma.
  auto rel_err = [](double gamma, double phi) {
    SweepGrid g;
    g.gamma_axis = {gamma};
    g.phi_axis = {phi};
    g.s_values = {0.1};
    const double r = sweep_first_segment(g).table("ratio_b")(0, 0);
    const double c2 = std::cos(phi) * std::cos(phi);
    return std::abs(r - c2) / c2;
  };
  for (double phi : {0.3, 0.7, 1.0}) {
    const double e1 = rel_err(1e-3, phi);
    const double e2 = rel_err(5e-4, phi);
    EXPECT_NEAR(e1 / e2, 2.0, 0.1) << phi;
  }
}
