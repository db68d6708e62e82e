#pragma once

// Certificates for the optimal product inputs.
//
// Fixed total photon number N: the product inputs are |n> (x) |N-n>, with
// QFI 2n(N-n) + N, maximized by the twin-Fock split.
//
// Fixed mean photon numbers Na, Nb: the best product input is a pair of
// oppositely squeezed vacua with QFI
//   2 Na Nb + Na + Nb + 2 sqrt(Na (Na+1) Nb (Nb+1)),
// and the equal split Na = Nb = N/2 gives N (N + 2).

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qfi/fock.hpp"

namespace qfi {

struct FixedTotalOptimum {
  std::vector<int> maximizers;  // every n with the maximal 2n(N-n) + N
  long long qfi_max = 0;
};

/// Exact enumeration over n = 0..N.
FixedTotalOptimum fixed_total_best(int total);

/// N(N+2)/2 for even N, (N(N+2)-1)/2 for odd N.
long long fixed_total_closed_form(int total);

/// Optimal product-input QFI for fixed mean photon numbers in each mode.
double split_optimum_qfi(double mean_a, double mean_b);

struct SplitScan {
  bool equal_split_best = false;
  double peak_mean_a = 0.0;   // grid point with the largest value
  double peak_value = 0.0;
  double equal_split_value = 0.0;
  double closed_form = 0.0;   // N (N + 2)
  double worst_margin = 0.0;  // min over grid of value(N/2) - value(Na)
};

/// Scans Na on a uniform grid over [0, N] with Nb = N - Na.
SplitScan equal_split_is_best(double total, int grid_points);

struct QuadratureBound {
  double lhs = 0.0;    // (<p^2> - <x^2>)^2
  double rhs = 0.0;    // 4 N (N + 1)
  double slack = 0.0;  // rhs - lhs
};

/// Throws InvariantViolation if slack < -1e-8.
QuadratureBound quadrature_bound_check(const ModeMoments& m);

/// Rescales amplitudes c_n -> c_n t^n (then renormalizes) with the t that
/// gives the requested mean photon number. Returns nullopt when the target is
/// out of reach for this support.
std::optional<SingleModeState> with_mean_photons(const SingleModeState& state, double mean);

/// Joint version: one common t for both modes so that Na + Nb = total.
std::optional<std::pair<SingleModeState, SingleModeState>> with_total_mean_photons(
    const SingleModeState& a, const SingleModeState& b, double total);

/// QFI(a, b) - penalty * (Na + Nb - target)^2 as a function of the raw
/// (unnormalized) amplitudes, laid out as [Re a, Im a, Re b, Im b], each of
/// length cutoff. Value and analytic gradient.
class PenaltyObjective {
 public:
  PenaltyObjective(int cutoff, double target_mean, double penalty);

  int cutoff() const noexcept { return cutoff_; }
  int num_parameters() const noexcept { return 4 * cutoff_; }
  void set_penalty(double penalty) noexcept { penalty_ = penalty; }

  double evaluate(std::span<const double> x, std::span<double> gradient = {}) const;

  // Normalized single-mode states encoded by `x`.
  std::pair<SingleModeState, SingleModeState> decode(std::span<const double> x) const;
  static std::vector<double> encode(const SingleModeState& a, const SingleModeState& b);

 private:
  int cutoff_;
  double target_;
  double penalty_;
};

struct SearchConfig {
  int restarts = 32;
  std::uint64_t seed = 20140101;
  std::vector<double> penalty_schedule{1e2, 1e3, 1e4, 1e5, 1e6};
  int max_iterations_per_stage = 1000;
  double gradient_tolerance = 1e-10;
  // A restart converged if, before projection, |Na + Nb - target| is below
  // this or the gradient norm is below `converged_gradient`.
  double converged_constraint = 1e-4;
  double converged_gradient = 1e-6;
  // Acceptance of a candidate: re-scored variance-form QFI within this of
  // the moment-form value.
  double rescore_tolerance = 1e-6;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct RestartRecord {
  std::uint64_t seed = 0;
  bool converged = false;
  bool accepted = false;
  int iterations = 0;
  double constraint_residual = 0.0;  // before projection
  double gradient_norm = 0.0;
  double qfi = 0.0;                  // moment form, after projection
  double rescored_qfi = 0.0;         // variance form, after projection
  std::string note;
};

struct SearchResult {
  bool converged = false;
  double best_qfi = 0.0;
  double rescored_qfi = 0.0;
  double bound = 0.0;  // N (N + 2)
  std::optional<SingleModeState> best_a;
  std::optional<SingleModeState> best_b;
  std::optional<TwoModeState> best_input;
  double odd_mass_a = 0.0;  // mass on odd photon numbers
  double odd_mass_b = 0.0;
  std::vector<RestartRecord> history;
  std::string message;
};

/// Random-restart penalty search for the best product input under a mean
/// total photon number constraint. Deterministic given (seed, restarts,
/// cutoff): restart i uses seed + i.
SearchResult mean_constrained_search(double mean_total, int cutoff, const SearchConfig& config = {});

}  // namespace qfi
