#include "qfi/fisher.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "parallel.hpp"

namespace qfi {

namespace {

constexpr double kQfiTolerance = 1e-10;
constexpr double kVarianceFloor = 1e-14;
constexpr double kSlopeFloor = 1e-12;

const char* const kConvention =
    "F = Var(N_d) after the first 50:50 splitter; N_d = a^dag a - b^dag b; "
    "phi1 = phi_d/2, phi2 = -phi_d/2 (no factor 4)";

FisherReport make_report(double qfi, FisherMethod method, double tail) {
  if (qfi < 0.0 && qfi > -kQfiTolerance) qfi = 0.0;
  FisherReport r;
  r.qfi = qfi;
  r.qcrb = qcrb(qfi);
  r.method = method;
  r.truncation_tail = tail;
  r.convention_note = kConvention;
  return r;
}

double five_point(double m2, double m1, double p1, double p2, double step) {
  return (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * step);
}

// Probabilities at phi + k * step / 2 for k = -4..4 (only the ones the
// five-point stencils at step and step/2 need).
struct Stencil {
  Eigen::MatrixXd at_minus2h, at_minus1h, at_minus_half, center, at_plus_half, at_plus1h,
      at_plus2h;
};

Stencil probabilities_around(const TwoModeState& after_first, double phi, double h,
                             MzConvention convention, const BeamSplitter& splitter) {
  auto p = [&](double x) { return mz_probs_after_splitter(after_first, x, convention, splitter); };
  return Stencil{p(phi - 2 * h), p(phi - h), p(phi - h / 2), p(phi),
                 p(phi + h / 2), p(phi + h), p(phi + 2 * h)};
}

double cfi_from(const Eigen::MatrixXd& m2, const Eigen::MatrixXd& m1, const Eigen::MatrixXd& c,
                const Eigen::MatrixXd& p1, const Eigen::MatrixXd& p2, double step, double floor) {
  double sum = 0.0;
  for (Eigen::Index j = 0; j < c.cols(); ++j) {
    for (Eigen::Index i = 0; i < c.rows(); ++i) {
      const double p = c(i, j);
      if (p <= floor) continue;
      const double dp = five_point(m2(i, j), m1(i, j), p1(i, j), p2(i, j), step);
      sum += dp * dp / p;
    }
  }
  return sum;
}

double cfi_at(const TwoModeState& after_first, double phi, MzConvention convention,
              const CfiOptions& options, const BeamSplitter& splitter) {
  const double h = options.derivative_step;
  if (!(h > 0.0)) throw std::invalid_argument("cfi_photon_counting: derivative step must be > 0");
  const Stencil s = probabilities_around(after_first, phi, h, convention, splitter);
  const double coarse = cfi_from(s.at_minus2h, s.at_minus1h, s.center, s.at_plus1h, s.at_plus2h,
                                 h, options.p_floor);
  const double fine = cfi_from(s.at_minus1h, s.at_minus_half, s.center, s.at_plus_half,
                               s.at_plus1h, h / 2, options.p_floor);
  const double gap = std::abs(coarse - fine);
  if (gap > 1e-12 && gap > options.richardson_tolerance * std::max(coarse, fine)) {
    throw DerivativeInstabilityError("cfi_photon_counting: step " + std::to_string(h) +
                                     " gives " + std::to_string(coarse) + " but step/2 gives " +
                                     std::to_string(fine) + " at phi_d = " + std::to_string(phi));
  }
  return coarse;
}

struct NdSquareMoments {
  double second = 0.0;  // <N_d^2>
  double fourth = 0.0;  // <N_d^4>
};

NdSquareMoments nd_square_moments(const Eigen::MatrixXd& probs) {
  NdSquareMoments m;
  for (Eigen::Index nb = 0; nb < probs.cols(); ++nb) {
    for (Eigen::Index na = 0; na < probs.rows(); ++na) {
      const double d = static_cast<double>(na - nb);
      const double d2 = d * d;
      m.second += d2 * probs(na, nb);
      m.fourth += d2 * d2 * probs(na, nb);
    }
  }
  return m;
}

}  // namespace

const char* to_string(FisherMethod method) {
  return method == FisherMethod::variance_form ? "variance_form" : "moment_form";
}

double qcrb(double qfi) {
  return qfi > 0.0 ? 1.0 / qfi : std::numeric_limits<double>::infinity();
}

double qcrb(const FisherReport& report) { return qcrb(report.qfi); }

FisherReport qfi_variance(const TwoModeState& input, const BeamSplitter& splitter) {
  const TwoModeState after = splitter.apply(input);
  return make_report(differenced_number_moments(after).variance(), FisherMethod::variance_form,
                     input.truncation_tail());
}

FisherReport qfi_entangled(const TwoModeState& post_splitter_state) {
  return make_report(differenced_number_moments(post_splitter_state).variance(),
                     FisherMethod::variance_form, post_splitter_state.truncation_tail());
}

FisherReport qfi_product(const ModeMoments& ma, const ModeMoments& mb, double truncation_tail) {
  const Complex a = ma.mean;
  const Complex b = mb.mean;
  const Complex value = 2.0 * ma.number * mb.number + ma.number + mb.number -
                        ma.pair_dag * mb.pair - ma.pair * mb.pair_dag -
                        2.0 * std::norm(a) * std::norm(b) +
                        std::conj(a) * std::conj(a) * b * b + a * a * std::conj(b) * std::conj(b);
  const double scale = std::max(1.0, std::abs(value.real()));
  if (std::abs(value.imag()) > kQfiTolerance * scale) {
    throw ConsistencyError("qfi_product: imaginary part " + std::to_string(value.imag()));
  }
  if (value.real() < -kQfiTolerance * scale) {
    throw ConsistencyError("qfi_product: negative value " + std::to_string(value.real()));
  }
  return make_report(std::max(0.0, value.real()), FisherMethod::moment_form, truncation_tail);
}

double cfi_photon_counting(const TwoModeState& input, double phi_d, MzConvention convention,
                           const CfiOptions& options, const BeamSplitter& splitter) {
  return cfi_at(splitter.apply(input), phi_d, convention, options, splitter);
}

PhaseScan cfi_scan(const TwoModeState& input, std::span<const double> grid,
                   MzConvention convention, const CfiOptions& options,
                   const BeamSplitter& splitter) {
  if (grid.empty()) throw DegenerateGridError("cfi_scan: empty phase grid");
  const TwoModeState after_first = splitter.apply(input);
  PhaseScan scan;
  scan.phis.assign(grid.begin(), grid.end());
  scan.values = detail::parallel_map<double>(grid.size(), [&](std::size_t i) {
    return cfi_at(after_first, grid[i], convention, options, splitter);
  });
  scan.best_phi = scan.phis.front();
  scan.best_value = scan.values.front();
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (scan.values[i] > scan.best_value) {
      scan.best_value = scan.values[i];
      scan.best_phi = scan.phis[i];
    }
  }
  return scan;
}

EstimatorScan moment_estimator_sensitivity(const TwoModeState& input,
                                           std::span<const double> grid,
                                           MzConvention convention, double derivative_step,
                                           const BeamSplitter& splitter) {
  if (grid.empty()) throw DegenerateGridError("moment_estimator_sensitivity: empty phase grid");
  if (!(derivative_step > 0.0)) {
    throw std::invalid_argument("moment_estimator_sensitivity: derivative step must be > 0");
  }
  const TwoModeState after_first = splitter.apply(input);
  const double h = derivative_step;
  const double nan = std::numeric_limits<double>::quiet_NaN();

  EstimatorScan scan;
  scan.phis.assign(grid.begin(), grid.end());
  scan.values = detail::parallel_map<double>(grid.size(), [&](std::size_t i) {
    std::array<double, 4> second{};
    const std::array<double, 4> offsets{-2 * h, -h, h, 2 * h};
    for (std::size_t k = 0; k < offsets.size(); ++k) {
      second[k] = nd_square_moments(
                      mz_probs_after_splitter(after_first, grid[i] + offsets[k], convention, splitter))
                      .second;
    }
    const NdSquareMoments at = nd_square_moments(
        mz_probs_after_splitter(after_first, grid[i], convention, splitter));
    const double slope = five_point(second[0], second[1], second[2], second[3], h);
    const double variance = at.fourth - at.second * at.second;
    if (variance < kVarianceFloor) return std::abs(slope) <= kSlopeFloor ? 0.0 : nan;
    return slope * slope / variance;
  });

  bool found = false;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = scan.values[i];
    if (std::isnan(v)) {
      ++scan.skipped;
      continue;
    }
    if (!found || v > scan.inverse_variance) {
      scan.inverse_variance = v;
      scan.best_phi = scan.phis[i];
      found = true;
    }
  }
  if (!found) {
    throw DegenerateGridError("moment_estimator_sensitivity: Var(N_d^2) vanishes at every grid point");
  }
  return scan;
}

}  // namespace qfi
