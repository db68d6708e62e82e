#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qfi/fisher.hpp"
#include "qfi/optimize.hpp"
#include "qfi/states.hpp"

using namespace qfi;

namespace {

TEST(FixedTotal, EnumerationMatchesClosedForm) {
  for (int n = 0; n <= 400; ++n) {
    EXPECT_EQ(fixed_total_best(n).qfi_max, fixed_total_closed_form(n)) << n;
  }
  EXPECT_THROW(fixed_total_best(-1), std::invalid_argument);
}

TEST(FixedTotal, OddTotalsHaveTwoMaximizers) {
  const auto three = fixed_total_best(3);
  EXPECT_EQ(three.qfi_max, 7);
  EXPECT_EQ(three.maximizers, (std::vector<int>{1, 2}));
  const auto twenty = fixed_total_best(20);
  EXPECT_EQ(twenty.qfi_max, 220);
  EXPECT_EQ(twenty.maximizers, (std::vector<int>{10}));
  EXPECT_EQ(fixed_total_best(2).qfi_max, 4);
}

TEST(FixedTotal, SimulatedProductInputsFollowEnumeration) {
  for (int total = 1; total <= 12; ++total) {
    for (int n = 0; n <= total; ++n) {
      const auto in = tensor(number_state(n, total + 1), number_state(total - n, total + 1));
      EXPECT_NEAR(qfi_variance(in).qfi, 2.0 * n * (total - n) + total, 1e-10);
    }
  }
}

TEST(SplitOptimum, EqualSplitGivesHeisenbergValue) {
  for (double n : {0.0, 0.5, 1.0, 2.0, 4.0, 10.0}) {
    EXPECT_NEAR(split_optimum_qfi(n / 2, n / 2), n * (n + 2), 1e-12 * (1 + n * n));
  }
  EXPECT_DOUBLE_EQ(split_optimum_qfi(1.0, 2.0), split_optimum_qfi(2.0, 1.0));
  EXPECT_THROW(split_optimum_qfi(-1.0, 1.0), std::invalid_argument);
}

TEST(SplitOptimum, EqualSplitIsBestOnGrid) {
  for (double total : {1.0, 2.0, 4.0, 7.5}) {
    const auto scan = equal_split_is_best(total, 101);
    EXPECT_TRUE(scan.equal_split_best) << total;
    EXPECT_NEAR(scan.peak_mean_a, total / 2, 1e-12);
    EXPECT_NEAR(scan.peak_value, total * (total + 2), 1e-10);
    EXPECT_GE(scan.worst_margin, 0.0);
  }
  EXPECT_THROW(equal_split_is_best(2.0, 2), std::invalid_argument);
}

TEST(SplitOptimum, ProductOfOppositeSqueezersMatchesClosedForm) {
  for (auto [na, nb] : std::vector<std::pair<double, double>>{{0.3, 0.7}, {1.0, 0.25}}) {
    const double ra = SqueezeSpec::for_mean_photons(na).r();
    const double rb = SqueezeSpec::for_mean_photons(nb).r();
    const auto a = squeezed_vacuum(SqueezeSpec::real(-ra), 96);
    const auto b = squeezed_vacuum(SqueezeSpec::real(rb), 96);
    EXPECT_NEAR(qfi_product(moments(a), moments(b)).qfi / split_optimum_qfi(na, nb), 1.0, 1e-8);
  }
}

TEST(Quadrature, HoldsForRandomStatesAndSaturates) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 500; ++trial) {
    const int d = 1 + static_cast<int>(rng() % 20);
    const auto s = SingleModeState::from_amplitudes(oracle::random_vector(rng, d));
    EXPECT_GE(quadrature_bound_check(moments(s)).slack, -1e-8);
  }
  const auto sv = squeezed_vacuum(SqueezeSpec::real(0.8), 96);
  const auto q = quadrature_bound_check(moments(sv));
  EXPECT_LE(std::abs(q.slack), 1e-6 * q.rhs);
}

TEST(Quadrature, ViolationThrows) {
  ModeMoments m;
  m.number = 0.0;
  m.quad_x2 = 0.1;
  m.quad_p2 = 2.0;
  EXPECT_THROW(quadrature_bound_check(m), InvariantViolation);
}

TEST(MeanProjection, HitsTargetAndKeepsSupport) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = SingleModeState::from_amplitudes(oracle::random_vector(rng, 12));
    const double target = 0.1 + 0.1 * trial;
    const auto moved = with_mean_photons(s, target);
    ASSERT_TRUE(moved.has_value());
    EXPECT_NEAR(moments(*moved).number, target, 1e-9);
    // Phases are untouched: c_n t^n with t > 0.
    for (int n = 0; n < 12; ++n) {
      EXPECT_NEAR(std::arg((*moved)[n] * std::conj(s[n])), 0.0, 1e-9);
    }
  }
  EXPECT_FALSE(with_mean_photons(number_state(3, 5), 1.0).has_value());
  EXPECT_FALSE(with_mean_photons(SingleModeState::from_amplitudes(Eigen::VectorXcd::Ones(4)), 3.5).has_value());
}

TEST(MeanProjection, JointTotal) {
  std::mt19937_64 rng(47);
  const auto a = SingleModeState::from_amplitudes(oracle::random_vector(rng, 10));
  const auto b = SingleModeState::from_amplitudes(oracle::random_vector(rng, 10));
  const auto moved = with_total_mean_photons(a, b, 2.0);
  ASSERT_TRUE(moved.has_value());
  EXPECT_NEAR(moments(moved->first).number + moments(moved->second).number, 2.0, 1e-9);
}

TEST(PenaltyObjective, ValueMatchesProductFormAtFeasiblePoints) {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 10);
    const auto a = SingleModeState::from_amplitudes(oracle::random_vector(rng, d));
    const auto b = SingleModeState::from_amplitudes(oracle::random_vector(rng, d));
    const double total = moments(a).number + moments(b).number;
    PenaltyObjective objective(d, total, 1e4);
    const auto x = PenaltyObjective::encode(a, b);
    EXPECT_NEAR(objective.evaluate(x), qfi_product(moments(a), moments(b)).qfi, 1e-10);
    // Scale invariance in each mode.
    auto scaled = x;
    for (int n = 0; n < 2 * d; ++n) scaled[n] *= 3.0;
    EXPECT_NEAR(objective.evaluate(scaled), objective.evaluate(x), 1e-9);
  }
}

TEST(PenaltyObjective, GradientMatchesCentralDifferences) {
  std::mt19937_64 rng(59);
  const double step = 1e-5;
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 8);
    PenaltyObjective objective(d, 1.5, 10.0);
    std::normal_distribution<double> normal;
    std::vector<double> x(4 * d);
    for (double& xi : x) xi = normal(rng);
    std::vector<double> grad(x.size());
    objective.evaluate(x, grad);
    double gnorm = 0.0;
    for (double g : grad) gnorm = std::max(gnorm, std::abs(g));
    for (std::size_t i = 0; i < x.size(); ++i) {
      auto plus = x, minus = x;
      plus[i] += step;
      minus[i] -= step;
      const double fd = (objective.evaluate(plus) - objective.evaluate(minus)) / (2 * step);
      EXPECT_NEAR(grad[i], fd, 1e-6 * std::max(1.0, gnorm)) << "trial " << trial << " component " << i;
    }
  }
}

TEST(PenaltyObjective, RejectsBadSizes) {
  PenaltyObjective objective(3, 1.0, 1.0);
  std::vector<double> x(11);
  EXPECT_THROW(objective.evaluate(x), DimensionError);
  EXPECT_THROW(PenaltyObjective(0, 1.0, 1.0), DimensionError);
}

SearchConfig small_config() {
  SearchConfig config;
  config.restarts = 8;
  config.seed = 777;
  return config;
}

TEST(Search, DeterministicForFixedSeed) {
  const auto first = mean_constrained_search(2.0, 10, small_config());
  const auto second = mean_constrained_search(2.0, 10, small_config());
  ASSERT_TRUE(first.converged);
  EXPECT_EQ(first.best_qfi, second.best_qfi);
  EXPECT_EQ(first.rescored_qfi, second.rescored_qfi);
  ASSERT_EQ(first.history.size(), second.history.size());
  for (std::size_t i = 0; i < first.history.size(); ++i) EXPECT_EQ(first.history[i].qfi, second.history[i].qfi);

  auto single = small_config();
  single.threads = 1;
  EXPECT_EQ(mean_constrained_search(2.0, 10, single).best_qfi, first.best_qfi);
}

TEST(Search, CertifiedBelowBoundAndAboveSqueezedReference) {
  const int d = 16;
  const auto result = mean_constrained_search(2.0, d, small_config());
  ASSERT_TRUE(result.converged);
  EXPECT_LE(result.best_qfi, 8.0 + 1e-5);
  EXPECT_NEAR(result.best_qfi, result.rescored_qfi, 1e-6);
  EXPECT_NEAR(moments(*result.best_a).number + moments(*result.best_b).number, 2.0, 1e-9);

  // Feasible reference: the truncated optimal pair pulled back to mean 2.
  const auto [a, b] = optimal_mean_factors(2.0, d, FactoryOptions{CutoffPolicy::reject, 1.0, 512});
  const auto ref = with_total_mean_photons(a, b, 2.0);
  ASSERT_TRUE(ref.has_value());
  const double reference = qfi_product(moments(ref->first), moments(ref->second)).qfi;
  EXPECT_GE(result.best_qfi, reference - 1e-6);
  // The optimum lives on even photon numbers.
  EXPECT_LT(result.odd_mass_a, 1e-6);
  EXPECT_LT(result.odd_mass_b, 1e-6);
}

TEST(Search, EdgeCases) {
  const auto vac = mean_constrained_search(0.0, 6);
  EXPECT_TRUE(vac.converged);
  EXPECT_EQ(vac.best_qfi, 0.0);
  EXPECT_THROW(mean_constrained_search(10.0, 6), TruncationError);
  EXPECT_THROW(mean_constrained_search(-1.0, 6), std::invalid_argument);
  SearchConfig none;
  none.restarts = 0;
  EXPECT_THROW(mean_constrained_search(1.0, 6, none), std::invalid_argument);
}

}  // namespace
