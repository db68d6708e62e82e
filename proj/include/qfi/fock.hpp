#pragma once

// Truncated Fock-space states for one and two bosonic modes.
//
// A single mode with cutoff D lives on |0>..|D-1>. Two modes share the same
// cutoff and are stored as a dense D x D grid indexed (n_a, n_b). Operators
// act on these vectors as if they were embedded in the infinite Fock space:
// a^dagger |D-1> = sqrt(D) |D> is not dropped by the moment routines, it simply
// contributes nothing to expectation values that stay inside the support.
//
// The differenced number operator is N_d = a^dagger a - b^dagger b. With this
// sign B^dagger N_d B = i (b^dagger a - a^dagger b) for the 50:50 splitter
// B = exp[-i pi/4 (a^dagger b + b^dagger a)]. The QFI is insensitive to the
// sign; <N_d> is not.

#include <complex>
#include <Eigen/Dense>

#include "qfi/errors.hpp"

namespace qfi {

using Complex = std::complex<double>;

// Default acceptability bound on the probability mass dropped by truncation.
inline constexpr double kTailTolerance = 1e-10;

class SingleModeState {
 public:
  /// Normalizes `amps`. `truncation_tail` is the mass the untruncated state
  /// had beyond the cutoff (0 for states that are exact in the basis).
  static SingleModeState from_amplitudes(Eigen::VectorXcd amps,
                                         double truncation_tail = 0.0);

  int cutoff() const noexcept { return static_cast<int>(amps_.size()); }
  const Eigen::VectorXcd& amplitudes() const noexcept { return amps_; }
  Complex operator[](int n) const { return amps_(n); }

  double norm_squared() const { return amps_.squaredNorm(); }

  /// Probability of finding at least k photons.
  double tail_mass(int k) const;

  double truncation_tail() const noexcept { return truncation_tail_; }

 private:
  SingleModeState(Eigen::VectorXcd amps, double tail)
      : amps_(std::move(amps)), truncation_tail_(tail) {}

  Eigen::VectorXcd amps_;
  double truncation_tail_ = 0.0;
};

class TwoModeState {
 public:
  /// Normalizes `amps` (must be square).
  static TwoModeState from_amplitudes(Eigen::MatrixXcd amps,
                                      double truncation_tail = 0.0);

  /// For unitary outputs: keeps `amps` as is, but rejects a norm that drifted
  /// more than `tolerance` from one.
  static TwoModeState from_unitary_output(Eigen::MatrixXcd amps,
                                          double truncation_tail,
                                          double tolerance = 1e-10);

  int cutoff() const noexcept { return static_cast<int>(amps_.rows()); }
  const Eigen::MatrixXcd& amplitudes() const noexcept { return amps_; }
  Complex operator()(int na, int nb) const { return amps_(na, nb); }

  double norm_squared() const { return amps_.squaredNorm(); }
  double truncation_tail() const noexcept { return truncation_tail_; }

  /// Amplitudes of |n, total-n> for n = 0..total; entries outside the grid
  /// are zero.
  Eigen::VectorXcd block(int total) const;

  /// Largest total photon number carrying a nonzero amplitude (-1 if none).
  int max_populated_total() const;

  /// Zero-padded copy with a larger cutoff.
  TwoModeState embedded(int new_cutoff) const;

 private:
  TwoModeState(Eigen::MatrixXcd amps, double tail)
      : amps_(std::move(amps)), truncation_tail_(tail) {}

  Eigen::MatrixXcd amps_;
  double truncation_tail_ = 0.0;
};

/// <a>, <aa>, <a^dagger a^dagger>, <a^dagger a>, <(a^dagger a)^2> and the
/// quadrature second moments for x = (a + a^dagger)/sqrt2,
/// p = (a - a^dagger)/(i sqrt2).
struct ModeMoments {
  Complex mean;
  Complex pair;
  Complex pair_dag;
  double number = 0.0;
  double number_sq = 0.0;
  double quad_x2 = 0.0;
  double quad_p2 = 0.0;
};

struct DifferencedMoments {
  double mean = 0.0;     // <N_d>
  double mean_sq = 0.0;  // <N_d^2>
  double variance() const { return mean_sq - mean * mean; }
};

TwoModeState tensor(const SingleModeState& a_state,
                    const SingleModeState& b_state);

ModeMoments moments(const SingleModeState& state);

DifferencedMoments differenced_number_moments(const TwoModeState& state);

/// Euclidean distance after zero-padding the smaller grid.
double distance(const TwoModeState& lhs, const TwoModeState& rhs);

// Rotates the global phase so that the first amplitude with modulus above
// `threshold` is real and positive.
void fix_global_phase(Eigen::VectorXcd& amps,
                      double threshold = 1e-300);
void fix_global_phase(Eigen::MatrixXcd& amps,
                      double threshold = 1e-300);

}  // namespace qfi
