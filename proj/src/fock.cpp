#include "qfi/fock.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qfi {

namespace {

double checked_norm(double norm_sq, const char* who) {
  if (!(norm_sq > 0.0) || !std::isfinite(norm_sq)) {
    throw DimensionError(std::string(who) + ": amplitudes have zero or non-finite norm");
  }
  return std::sqrt(norm_sq);
}

}  // namespace

SingleModeState SingleModeState::from_amplitudes(Eigen::VectorXcd amps,
                                                 double truncation_tail) {
  if (amps.size() == 0) throw DimensionError("SingleModeState: cutoff must be positive");
  amps /= checked_norm(amps.squaredNorm(), "SingleModeState");
  return SingleModeState(std::move(amps), std::max(0.0, truncation_tail));
}

double SingleModeState::tail_mass(int k) const {
  double mass = 0.0;
  for (int n = cutoff() - 1; n >= std::max(k, 0); --n) mass += std::norm(amps_(n));
  return mass;
}

TwoModeState TwoModeState::from_amplitudes(Eigen::MatrixXcd amps,
                                           double truncation_tail) {
  if (amps.rows() == 0 || amps.rows() != amps.cols()) {
    throw DimensionError("TwoModeState: amplitude grid must be square and nonempty");
  }
  amps /= checked_norm(amps.squaredNorm(), "TwoModeState");
  return TwoModeState(std::move(amps), std::max(0.0, truncation_tail));
}

TwoModeState TwoModeState::from_unitary_output(Eigen::MatrixXcd amps,
                                               double truncation_tail,
                                               double tolerance) {
  if (amps.rows() == 0 || amps.rows() != amps.cols()) {
    throw DimensionError("TwoModeState: amplitude grid must be square and nonempty");
  }
  const double drift = std::abs(amps.squaredNorm() - 1.0);
  if (drift > tolerance) {
    throw InvariantViolation("TwoModeState: unitary output lost normalization (drift " +
                             std::to_string(drift) + ")");
  }
  return TwoModeState(std::move(amps), std::max(0.0, truncation_tail));
}

Eigen::VectorXcd TwoModeState::block(int total) const {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(std::max(total + 1, 0));
  const int d = cutoff();
  for (int n = std::max(0, total - d + 1); n <= std::min(total, d - 1); ++n) {
    out(n) = amps_(n, total - n);
  }
  return out;
}

int TwoModeState::max_populated_total() const {
  int best = -1;
  const int d = cutoff();
  for (int na = 0; na < d; ++na) {
    for (int nb = d - 1; nb >= 0; --nb) {
      if (amps_(na, nb) != Complex(0.0, 0.0)) {
        best = std::max(best, na + nb);
        break;
      }
    }
  }
  return best;
}

TwoModeState TwoModeState::embedded(int new_cutoff) const {
  if (new_cutoff < cutoff()) {
    throw DimensionError("TwoModeState::embedded: new cutoff is smaller than the current one");
  }
  Eigen::MatrixXcd grid = Eigen::MatrixXcd::Zero(new_cutoff, new_cutoff);
  grid.topLeftCorner(cutoff(), cutoff()) = amps_;
  return TwoModeState(std::move(grid), truncation_tail_);
}

TwoModeState tensor(const SingleModeState& a_state, const SingleModeState& b_state) {
  if (a_state.cutoff() != b_state.cutoff()) {
    throw DimensionError("tensor: cutoffs differ (" + std::to_string(a_state.cutoff()) +
                         " vs " + std::to_string(b_state.cutoff()) + ")");
  }
  Eigen::MatrixXcd grid = a_state.amplitudes() * b_state.amplitudes().transpose();
  const double ta = a_state.truncation_tail();
  const double tb = b_state.truncation_tail();
  return TwoModeState::from_amplitudes(std::move(grid), ta + tb - ta * tb);
}

ModeMoments moments(const SingleModeState& state) {
  const auto& c = state.amplitudes();
  const int d = state.cutoff();
  if (std::abs(c.squaredNorm() - 1.0) > 1e-10) {
    throw InvariantViolation("moments: state is not normalized");
  }

  // a|n> = sqrt(n)|n-1>, so <a> = sum_n conj(c_{n-1}) sqrt(n) c_n.
  Complex mean{0.0, 0.0};
  Complex pair{0.0, 0.0};
  double number = 0.0;
  double number_sq = 0.0;
  for (int n = 0; n < d; ++n) {
    const double p = std::norm(c(n));
    number += n * p;
    number_sq += static_cast<double>(n) * n * p;
    if (n >= 1) mean += std::conj(c(n - 1)) * std::sqrt(static_cast<double>(n)) * c(n);
    if (n >= 2) {
      pair += std::conj(c(n - 2)) * std::sqrt(static_cast<double>(n) * (n - 1)) * c(n);
    }
  }

  ModeMoments m;
  m.mean = mean;
  m.pair = pair;
  m.pair_dag = std::conj(pair);
  m.number = number;
  m.number_sq = number_sq;
  // <x^2> = (<aa> + <a+a+> + 2N + 1)/2 and <p^2> = (2N + 1 - <aa> - <a+a+>)/2
  const double re_pair = pair.real();
  m.quad_x2 = (2.0 * re_pair + 2.0 * number + 1.0) / 2.0;
  m.quad_p2 = (2.0 * number + 1.0 - 2.0 * re_pair) / 2.0;
  return m;
}

DifferencedMoments differenced_number_moments(const TwoModeState& state) {
  const auto& g = state.amplitudes();
  const int d = state.cutoff();
  DifferencedMoments out;
  for (int nb = 0; nb < d; ++nb) {
    for (int na = 0; na < d; ++na) {
      const double p = std::norm(g(na, nb));
      const double diff = na - nb;
      out.mean += diff * p;
      out.mean_sq += diff * diff * p;
    }
  }
  return out;
}

double distance(const TwoModeState& lhs, const TwoModeState& rhs) {
  const int d = std::max(lhs.cutoff(), rhs.cutoff());
  Eigen::MatrixXcd diff = Eigen::MatrixXcd::Zero(d, d);
  diff.topLeftCorner(lhs.cutoff(), lhs.cutoff()) += lhs.amplitudes();
  diff.topLeftCorner(rhs.cutoff(), rhs.cutoff()) -= rhs.amplitudes();
  return diff.norm();
}

void fix_global_phase(Eigen::VectorXcd& amps, double threshold) {
  for (Eigen::Index i = 0; i < amps.size(); ++i) {
    const double mod = std::abs(amps(i));
    if (mod > threshold) {
      const Complex rot = std::conj(amps(i)) / mod;
      amps *= rot;
      amps(i) = Complex(mod, 0.0);
      return;
    }
  }
}

void fix_global_phase(Eigen::MatrixXcd& amps, double threshold) {
  for (Eigen::Index r = 0; r < amps.rows(); ++r) {
    for (Eigen::Index c = 0; c < amps.cols(); ++c) {
      const double mod = std::abs(amps(r, c));
      if (mod > threshold) {
        const Complex rot = std::conj(amps(r, c)) / mod;
        amps *= rot;
        amps(r, c) = Complex(mod, 0.0);
        return;
      }
    }
  }
}

}  // namespace qfi
