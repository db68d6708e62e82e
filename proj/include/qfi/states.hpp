#pragma once

// Constructors for the state families used in phase estimation: number,
// coherent and squeezed-vacuum single-mode states, and the two-mode twin-Fock,
// N00N and dual squeezed-vacuum inputs.
//
// Every factory output is normalized on its truncated basis and carries the
// probability mass the exact state has beyond the cutoff.

#include <utility>

#include "qfi/fock.hpp"

namespace qfi {

enum class CutoffPolicy {
  reject,      // throw TruncationError when the tail is too large
  auto_raise,  // double the cutoff until the tail fits (up to max_cutoff)
};

struct FactoryOptions {
  CutoffPolicy policy = CutoffPolicy::reject;
  double tail_tolerance = kTailTolerance;
  int max_cutoff = 512;
};

/// Squeeze parameter gamma of S(gamma) = exp[(gamma a^2 - conj(gamma) a^dag^2)/2].
/// Real positive gamma squeezes x = (a + a^dag)/sqrt2; gamma = -r squeezes p.
/// Complex gamma rotates the squeezed quadrature.
struct SqueezeSpec {
  Complex gamma{0.0, 0.0};

  double r() const { return std::abs(gamma); }

  static SqueezeSpec real(double r) { return SqueezeSpec{Complex(r, 0.0)}; }
  /// Real positive squeeze that gives mean photon number `mean` (sinh^2 r).
  static SqueezeSpec for_mean_photons(double mean);
};

// Probability mass of the exact (untruncated) states at photon numbers >= cutoff.
double coherent_tail(Complex alpha, int cutoff);
double squeezed_vacuum_tail(double r, int cutoff);

SingleModeState number_state(int n, int cutoff);

SingleModeState coherent_state(Complex alpha, int cutoff, const FactoryOptions& options = {});

/// Built from the exact even-photon amplitude ratio
///   c_{2m+2} / c_{2m} = -e^{-i arg gamma} tanh r sqrt((2m+1)/(2m+2)),
/// c_0 = 1/sqrt(cosh r), then renormalized on the truncated basis.
SingleModeState squeezed_vacuum(const SqueezeSpec& spec, int cutoff,
                                const FactoryOptions& options = {});

/// |N/2, N/2> for even N; |(N+1)/2, (N-1)/2> for odd N, or the mode-exchanged
/// |(N-1)/2, (N+1)/2> when `exchange_modes` is set.
TwoModeState twin_fock_input(int total, int cutoff, bool exchange_modes = false);

enum class DegenerateNoon { allow, reject };

/// (|N,0> + |0,N>)/sqrt2. This is a post-beam-splitter state; score it with
/// qfi_entangled, not qfi_variance.
TwoModeState noon_state(int total, int cutoff, DegenerateNoon degenerate = DegenerateNoon::allow);

/// S_a(-r)|0> (x) S_b(r)|0> with sinh^2 r = mean_total / 2. Mean totals below
/// 1e-9 give the vacuum.
TwoModeState optimal_mean_input(double mean_total, int cutoff, const FactoryOptions& options = {});

/// Mode factors of optimal_mean_input, for moment-form scoring.
std::pair<SingleModeState, SingleModeState> optimal_mean_factors(double mean_total, int cutoff,
                                                                 const FactoryOptions& options = {});

}  // namespace qfi
