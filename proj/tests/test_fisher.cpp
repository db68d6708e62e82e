#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "qfi/fisher.hpp"
#include "qfi/states.hpp"

using namespace qfi;

namespace {

constexpr double kPi = std::numbers::pi;

SingleModeState random_mode(std::mt19937_64& rng, int d) {
  return SingleModeState::from_amplitudes(oracle::random_vector(rng, d));
}

// Var(N_d) on B|psi> with every operator built densely.
double dense_qfi(const TwoModeState& in) {
  const int big = std::max(1, 2 * in.cutoff() - 1);
  const Eigen::VectorXcd v =
      oracle::splitter(big, kPi / 4) * oracle::flatten(in.embedded(big).amplitudes());
  const Eigen::MatrixXcd nd = oracle::differenced_number(big);
  const double m1 = oracle::expect(v, nd).real();
  const double m2 = oracle::expect(v, nd * nd).real();
  return m2 - m1 * m1;
}

TEST(Qfi, VarianceFormMatchesDenseOracle) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 1 + static_cast<int>(rng() % 6);
    const auto in = TwoModeState::from_amplitudes(oracle::unflatten(oracle::random_vector(rng, d * d), d));
    EXPECT_NEAR(qfi_variance(in).qfi, dense_qfi(in), 1e-10);
  }
}

TEST(Qfi, ProductFormsAgreeOnRandomInputs) {
  std::mt19937_64 rng(23);
  double worst = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const int d = 1 + static_cast<int>(rng() % 10);
    const auto a = random_mode(rng, d);
    const auto b = random_mode(rng, d);
    worst = std::max(worst, std::abs(qfi_product(moments(a), moments(b)).qfi - qfi_variance(tensor(a, b)).qfi));
  }
  EXPECT_LT(worst, 1e-8);
}

TEST(Qfi, NamedExamples) {
  EXPECT_NEAR(qfi_variance(tensor(number_state(1, 3), number_state(1, 3))).qfi, 4.0, 1e-12);
  const auto coh = coherent_state(Complex(2.0, 0.0), 48);
  const auto vac = number_state(0, 48);
  EXPECT_NEAR(qfi_variance(tensor(coh, vac)).qfi, 4.0, 1e-9);
  EXPECT_NEAR(qfi_product(moments(coh), moments(vac)).qfi, 4.0, 1e-9);
  for (int n = 1; n <= 20; ++n) {
    EXPECT_NEAR(qfi_entangled(noon_state(n, n + 1)).qfi, double(n) * n, 1e-9);
  }
}

TEST(Qfi, DualSqueezedReachesBound) {
  // sinh^2 r = 1 per mode: the N = 2 optimum 8. At D = 64 the truncation
  // deficit is below 1e-8 relative.
  const auto [a, b] = optimal_mean_factors(2.0, 64);
  const auto in = tensor(a, b);
  EXPECT_NEAR(qfi_variance(in).qfi, 8.0, 8e-8);
  EXPECT_NEAR(qfi_product(moments(a), moments(b)).qfi, 8.0, 8e-8);
}

TEST(Qfi, ReportCarriesBoundAndConvention) {
  const auto r = qfi_variance(twin_fock_input(4, 3));
  EXPECT_EQ(r.method, FisherMethod::variance_form);
  EXPECT_NEAR(r.qcrb, 1.0 / 12.0, 1e-15);
  EXPECT_FALSE(r.convention_note.empty());
  EXPECT_TRUE(std::isinf(qcrb(0.0)));
  EXPECT_TRUE(std::isinf(qfi_variance(twin_fock_input(0, 2)).qcrb));
}

TEST(Qfi, ProductFormRejectsInconsistentMoments) {
  ModeMoments a;
  a.number = 1.0;
  a.mean = Complex(0.3, 0.0);
  a.pair = Complex(0.5, 0.0);
  a.pair_dag = Complex(0.5, 0.0);
  ModeMoments b = a;
  b.pair = Complex(0.0, 0.5);
  b.pair_dag = Complex(0.0, 0.0);  // not the conjugate of pair: imaginary QFI
  EXPECT_THROW(qfi_product(a, b), ConsistencyError);

  ModeMoments c;
  c.number = 0.0;
  ModeMoments d;
  d.number = 0.0;
  d.pair = Complex(10.0, 0.0);
  d.pair_dag = Complex(10.0, 0.0);
  c.pair = Complex(10.0, 0.0);
  c.pair_dag = Complex(10.0, 0.0);
  EXPECT_THROW(qfi_product(c, d), ConsistencyError);
}

TEST(Qfi, LocalPhaseInvarianceUnderCommonRotation) {
  // Rotating both modes by the same phase leaves the QFI unchanged.
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 8);
    const auto a = random_mode(rng, d);
    const auto b = random_mode(rng, d);
    Eigen::VectorXcd ra = a.amplitudes(), rb = b.amplitudes();
    for (int n = 0; n < d; ++n) {
      ra(n) *= std::exp(Complex(0.0, 0.7 * n));
      rb(n) *= std::exp(Complex(0.0, 0.7 * n));
    }
    const double base = qfi_variance(tensor(a, b)).qfi;
    const double rotated = qfi_variance(tensor(SingleModeState::from_amplitudes(ra),
                                               SingleModeState::from_amplitudes(rb))).qfi;
    EXPECT_NEAR(base, rotated, 1e-10);
  }
}

TEST(Cfi, NeverExceedsQfiForRandomInputs) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 5);
    const auto a = SingleModeState::from_amplitudes(oracle::random_real_vector(rng, d));
    const auto b = SingleModeState::from_amplitudes(oracle::random_vector(rng, d));
    const auto in = tensor(a, b);
    const double qfi = qfi_variance(in).qfi;
    for (auto conv : {MzConvention::same_B, MzConvention::inverse_B}) {
      const double phi = 0.2 + 0.1 * trial;
      EXPECT_LE(cfi_photon_counting(in, phi, conv), qfi + 1e-6);
    }
  }
}

TEST(Cfi, TwinFockSaturatesQfi) {
  const auto in = twin_fock_input(2, 3);
  EXPECT_NEAR(cfi_photon_counting(in, 0.9, MzConvention::inverse_B), 4.0, 4e-3);
  EXPECT_NEAR(cfi_photon_counting(twin_fock_input(3, 3), 1.1, MzConvention::inverse_B), 7.0, 7e-3);
}

TEST(Cfi, CoarseStepTripsTheRichardsonCheck) {
  const auto in = twin_fock_input(4, 3);
  CfiOptions options;
  options.derivative_step = 0.5;
  EXPECT_THROW(cfi_photon_counting(in, 0.7, MzConvention::inverse_B, options), DerivativeInstabilityError);
  options.derivative_step = -1.0;
  EXPECT_THROW(cfi_photon_counting(in, 0.7, MzConvention::inverse_B, options), std::invalid_argument);
}

TEST(Cfi, ScanIsOrderIndependentAndPicksMaximum) {
  const auto in = optimal_mean_input(1.0, 64);
  std::vector<double> grid;
  for (int k = 0; k < 16; ++k) grid.push_back(0.05 + 0.19 * k);
  const auto scan = cfi_scan(in, grid, MzConvention::inverse_B);
  ASSERT_EQ(scan.values.size(), grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_DOUBLE_EQ(scan.values[i], cfi_photon_counting(in, grid[i], MzConvention::inverse_B));
    EXPECT_LE(scan.values[i], scan.best_value);
  }
  EXPECT_THROW(cfi_scan(in, std::vector<double>{}, MzConvention::inverse_B), DegenerateGridError);
}

TEST(MomentEstimator, VacuumScoresZeroWithoutSkipping) {
  const auto vac = tensor(number_state(0, 2), number_state(0, 2));
  const std::vector<double> grid{0.1, 0.5, 1.0};
  const auto scan = moment_estimator_sensitivity(vac, grid, MzConvention::inverse_B);
  EXPECT_EQ(scan.skipped, 0);
  EXPECT_EQ(scan.inverse_variance, 0.0);
  EXPECT_THROW(moment_estimator_sensitivity(vac, std::vector<double>{}, MzConvention::inverse_B),
               DegenerateGridError);
}

TEST(MomentEstimator, BoundedByQfiAndPeaksNearQuarterTurn) {
  const auto in = optimal_mean_input(2.0, 80);
  const double qfi = qfi_variance(in).qfi;
  std::vector<double> grid;
  for (int k = 1; k < 40; ++k) grid.push_back(kPi / 2 - 0.3 * std::pow(0.8, k));
  grid.push_back(0.3);
  const auto scan = moment_estimator_sensitivity(in, grid, MzConvention::inverse_B);
  for (double v : scan.values) EXPECT_LE(v, qfi + 1e-6);
  EXPECT_GT(scan.inverse_variance, 0.99 * qfi);
  EXPECT_GT(scan.best_phi, 1.5);
  // Zero phase carries no information for this input.
  const auto at_zero = moment_estimator_sensitivity(in, std::vector<double>{0.0}, MzConvention::inverse_B);
  EXPECT_NEAR(at_zero.inverse_variance, 0.0, 1e-6);
}

}  // namespace
