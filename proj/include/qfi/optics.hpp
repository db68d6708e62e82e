#pragma once

// Interferometer unitaries on truncated two-mode states.
//
//   beam splitter  B(theta) = exp[-i theta (a^dag b + b^dag a)],  theta = pi/4 for 50:50
//   phase shifter  U = exp[i (phi1 a^dag a + phi2 b^dag b)]
//
// B conserves the total photon number T, so it acts block by block on the
// anti-diagonals {(n, T-n)}. Output grids are widened to cutoff
// max(D, T_max + 1), T_max being the largest populated total, so the action
// is exact on the embedded state and the norm is preserved.

#include <memory>
#include <numbers>

#include "qfi/fock.hpp"

namespace qfi {

struct PhaseSetting {
  double phi1 = 0.0;
  double phi2 = 0.0;

  double differential() const { return phi1 - phi2; }

  /// phi1 = phi_d/2 + common, phi2 = -phi_d/2 + common. The differential
  /// phase then couples through N_d / 2.
  static PhaseSetting balanced(double phi_d, double common = 0.0) {
    return {phi_d / 2.0 + common, -phi_d / 2.0 + common};
  }
};

/// Orientation of the recombining splitter of the Mach-Zehnder.
enum class MzConvention {
  same_B,     // B again
  inverse_B,  // B^dagger: images the input counts at phi_d = 0
};

enum class BlockMethod {
  eigendecomposition,  // reference path: V exp(-i theta Lambda) V^T per block
  ladder_recursion,    // columns from B a^dag B^dag = a^dag cos(theta) - i b^dag sin(theta)
};

namespace detail {
class BlockCache;
}

class BeamSplitter {
 public:
  explicit BeamSplitter(double mixing_angle = std::numbers::pi / 4.0,
                        BlockMethod method = BlockMethod::eigendecomposition);

  /// Shared 50:50 splitter whose block cache lives for the whole program.
  static const BeamSplitter& balanced();

  double mixing_angle() const noexcept { return angle_; }
  BlockMethod method() const noexcept { return method_; }

  /// (T+1) x (T+1) unitary acting on |n, T-n>, n = 0..T. Thread-safe; blocks
  /// are computed once and shared.
  std::shared_ptr<const Eigen::MatrixXcd> block_unitary(int total) const;

  TwoModeState apply(const TwoModeState& state) const;
  TwoModeState apply_inverse(const TwoModeState& state) const;

 private:
  TwoModeState apply_impl(const TwoModeState& state, bool inverse) const;

  double angle_;
  BlockMethod method_;
  std::shared_ptr<detail::BlockCache> cache_;
};

TwoModeState beam_splitter_apply(const TwoModeState& state);
TwoModeState inverse_beam_splitter_apply(const TwoModeState& state);

TwoModeState phase_shift_apply(const TwoModeState& state, const PhaseSetting& phases);

/// Photon-count distribution over (n_a, n_b) after B2 U(phases) B, where B2 is
/// chosen by `convention`.
Eigen::MatrixXd mz_output_probs(const TwoModeState& input, const PhaseSetting& phases,
                                MzConvention convention = MzConvention::inverse_B,
                                const BeamSplitter& splitter = BeamSplitter::balanced());

/// Same with the balanced parametrization phi1 = phi_d/2, phi2 = -phi_d/2.
Eigen::MatrixXd mz_output_probs(const TwoModeState& input, double phi_d,
                                MzConvention convention = MzConvention::inverse_B,
                                const BeamSplitter& splitter = BeamSplitter::balanced());

/// Second half of the interferometer, for callers that scan phases on a fixed
/// input and keep B|input> around.
Eigen::MatrixXd mz_probs_after_splitter(const TwoModeState& after_first, double phi_d,
                                        MzConvention convention,
                                        const BeamSplitter& splitter = BeamSplitter::balanced());

}  // namespace qfi
