#pragma once

// Fisher information for the differential phase phi_d = phi1 - phi2.
//
// With phi1 = phi_d/2 and phi2 = -phi_d/2 the phase couples through N_d/2,
// so the pure-state QFI 4 Var(N_d/2) equals Var(N_d) evaluated after the
// first beam splitter. No extra factor of 4 appears anywhere below.

#include <span>
#include <string>
#include <vector>

#include "qfi/fock.hpp"
#include "qfi/optics.hpp"

namespace qfi {

enum class FisherMethod { variance_form, moment_form };

struct FisherReport {
  double qfi = 0.0;
  double qcrb = 0.0;  // 1/qfi, +inf when qfi == 0
  FisherMethod method = FisherMethod::variance_form;
  double truncation_tail = 0.0;
  std::string convention_note;
};

const char* to_string(FisherMethod method);

/// Var(N_d) on B|input>.
FisherReport qfi_variance(const TwoModeState& input,
                          const BeamSplitter& splitter = BeamSplitter::balanced());

/// Var(N_d) on the state as given, read as the state after the splitter
/// (e.g. a N00N state).
FisherReport qfi_entangled(const TwoModeState& post_splitter_state);

/// Closed form for product inputs in terms of single-mode moments:
///   2 Na Nb + Na + Nb - <a+a+><bb> - <aa><b+b+>
///   - 2|<a>|^2 |<b>|^2 + <a+>^2 <b>^2 + <a>^2 <b+>^2
/// Throws ConsistencyError if the result has an imaginary part or a negative
/// value beyond 1e-10 (relative to its scale); roundoff negatives are clamped.
FisherReport qfi_product(const ModeMoments& ma, const ModeMoments& mb,
                         double truncation_tail = 0.0);

double qcrb(const FisherReport& report);
double qcrb(double qfi);

struct CfiOptions {
  double derivative_step = 1e-4;
  double p_floor = 1e-14;
  // Relative disagreement allowed between steps h and h/2.
  double richardson_tolerance = 1e-4;
};

/// Classical Fisher information of photon counting at the MZ output,
///   sum over outcomes with p > p_floor of (dp/dphi)^2 / p,
/// with five-point central differences. Throws DerivativeInstabilityError
/// when halving the step changes the value by more than the tolerance.
double cfi_photon_counting(const TwoModeState& input, double phi_d, MzConvention convention,
                           const CfiOptions& options = {},
                           const BeamSplitter& splitter = BeamSplitter::balanced());

struct PhaseScan {
  double best_phi = 0.0;
  double best_value = 0.0;
  std::vector<double> phis;
  std::vector<double> values;
};

/// cfi_photon_counting on every grid point (in parallel, order independent).
PhaseScan cfi_scan(const TwoModeState& input, std::span<const double> grid,
                   MzConvention convention, const CfiOptions& options = {},
                   const BeamSplitter& splitter = BeamSplitter::balanced());

struct EstimatorScan {
  double best_phi = 0.0;
  double inverse_variance = 0.0;
  std::vector<double> phis;
  std::vector<double> values;  // NaN where the point was skipped
  int skipped = 0;
};

/// Error-propagation sensitivity of the squared differenced photocount,
///   S(phi) = (d<N_d^2>/dphi)^2 / Var(N_d^2),
/// on the MZ output distribution, maximized over the grid.
///
/// A point whose Var(N_d^2) is below 1e-14 is skipped when its slope is
/// nonzero (the ratio is singular) and scores 0 when the slope also vanishes
/// (no phase information, e.g. vacuum). If every point is skipped the grid is
/// degenerate.
EstimatorScan moment_estimator_sensitivity(const TwoModeState& input,
                                           std::span<const double> grid,
                                           MzConvention convention,
                                           double derivative_step = 1e-4,
                                           const BeamSplitter& splitter = BeamSplitter::balanced());

}  // namespace qfi
