#include "qfi/states.hpp"

#include <cmath>
#include <functional>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>

namespace qfi {

namespace {

constexpr double kDegenerateMean = 1e-9;
constexpr int kTailSearchCap = 1 << 16;

// Sums a series of nonnegative terms starting at `first` whose successive
// ratio is given by `ratio(k)` (term k+1 / term k); stops once terms are
// negligible, then bounds the remainder geometrically with `ratio_bound`
// (negative: use the last ratio, valid for decreasing ratios).
double sum_tail_series(double first, const std::function<double(long)>& ratio,
                       double ratio_bound) {
  if (first <= 0.0) return 0.0;
  double sum = 0.0;
  double term = first;
  double q = 0.0;
  for (long k = 0; k < 4'000'000; ++k) {
    sum += term;
    q = ratio(k);
    term *= q;
    if (term <= 1e-18 * sum && q < 1.0) break;
    if (term == 0.0) break;
  }
  const double bound = ratio_bound < 0.0 ? q : ratio_bound;
  if (bound < 1.0) sum += term * bound / (1.0 - bound);
  return sum;
}

// Smallest cutoff >= start whose tail is below the tolerance, or -1.
int search_cutoff(const std::function<double(int)>& tail, int start, double tolerance) {
  for (int d = std::max(start, 1); d <= kTailSearchCap; d = (d < 64 ? d + 1 : d + d / 8)) {
    if (tail(d) < tolerance) {
      // Step back to the exact minimum after the coarse stride.
      while (d > start && tail(d - 1) < tolerance) --d;
      return d;
    }
  }
  return -1;
}

// Resolves the cutoff according to the policy, throwing on failure.
int resolve_cutoff(const std::function<double(int)>& tail, int cutoff,
                   const FactoryOptions& options, const char* who) {
  if (cutoff < 1) throw CutoffError(std::string(who) + ": cutoff must be positive");
  double t = tail(cutoff);
  if (t < options.tail_tolerance) return cutoff;
  int last = cutoff;
  if (options.policy == CutoffPolicy::auto_raise) {
    while (last < options.max_cutoff) {
      last = std::min(2 * last, options.max_cutoff);
      t = tail(last);
      if (t < options.tail_tolerance) return last;
    }
  }
  const int needed = search_cutoff(tail, cutoff, options.tail_tolerance);
  std::ostringstream msg;
  msg << who << ": tail mass " << std::setprecision(3) << t << " at cutoff " << last << " exceeds "
      << options.tail_tolerance;
  if (needed > 0) msg << "; requires cutoff " << needed;
  throw TruncationError(msg.str(), needed, t);
}

}  // namespace

SqueezeSpec SqueezeSpec::for_mean_photons(double mean) {
  if (mean < 0.0) throw std::invalid_argument("SqueezeSpec: mean photon number must be >= 0");
  return SqueezeSpec::real(std::asinh(std::sqrt(mean)));
}

double coherent_tail(Complex alpha, int cutoff) {
  const double mod2 = std::norm(alpha);
  if (cutoff <= 0) return 1.0;
  if (mod2 == 0.0) return 0.0;
  // Poisson(|alpha|^2) mass at n >= cutoff.
  const double log_first = -mod2 + cutoff * std::log(mod2) - std::lgamma(cutoff + 1.0);
  const double first = std::exp(log_first);
  return std::min(1.0, sum_tail_series(
                           first, [&](long k) { return mod2 / (cutoff + k + 1.0); }, -1.0));
}

double squeezed_vacuum_tail(double r, int cutoff) {
  r = std::abs(r);
  if (cutoff <= 0) return 1.0;
  if (r == 0.0) return 0.0;
  const double t2 = std::tanh(r) * std::tanh(r);
  const long m0 = (cutoff + 1) / 2;  // first even index 2*m0 >= cutoff
  // |c_{2m}|^2 = tanh^{2m} r (2m)! / (4^m (m!)^2 cosh r)
  const double log_first = -std::log(std::cosh(r)) + m0 * std::log(t2) +
                           std::lgamma(2.0 * m0 + 1.0) - 2.0 * m0 * std::log(2.0) -
                           2.0 * std::lgamma(m0 + 1.0);
  return std::min(1.0, sum_tail_series(
                           std::exp(log_first),
                           [&](long k) {
                             const double m = static_cast<double>(m0 + k);
                             return t2 * (2.0 * m + 1.0) / (2.0 * m + 2.0);
                           },
                           t2));
}

SingleModeState number_state(int n, int cutoff) {
  if (n < 0) throw CutoffError("number_state: photon number must be nonnegative");
  if (n >= cutoff) {
    throw CutoffError("number_state: |" + std::to_string(n) + "> needs cutoff > " +
                      std::to_string(n) + ", got " + std::to_string(cutoff));
  }
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(cutoff);
  amps(n) = 1.0;
  return SingleModeState::from_amplitudes(std::move(amps));
}

SingleModeState coherent_state(Complex alpha, int cutoff, const FactoryOptions& options) {
  const int d = resolve_cutoff([&](int c) { return coherent_tail(alpha, c); }, cutoff, options,
                               "coherent_state");
  Eigen::VectorXcd amps(d);
  amps(0) = std::exp(-std::norm(alpha) / 2.0);
  for (int n = 1; n < d; ++n) amps(n) = amps(n - 1) * alpha / std::sqrt(static_cast<double>(n));
  fix_global_phase(amps);
  return SingleModeState::from_amplitudes(std::move(amps), coherent_tail(alpha, d));
}

SingleModeState squeezed_vacuum(const SqueezeSpec& spec, int cutoff, const FactoryOptions& options) {
  const double r = spec.r();
  const int d = resolve_cutoff([&](int c) { return squeezed_vacuum_tail(r, c); }, cutoff, options,
                               "squeezed_vacuum");
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(d);
  amps(0) = 1.0 / std::sqrt(std::cosh(r));
  if (r > 0.0) {
    const Complex step = -std::exp(Complex(0.0, -std::arg(spec.gamma))) * std::tanh(r);
    for (int n = 2; n < d; n += 2) {
      amps(n) = amps(n - 2) * step * std::sqrt((n - 1.0) / n);
    }
  }
  fix_global_phase(amps);
  return SingleModeState::from_amplitudes(std::move(amps), squeezed_vacuum_tail(r, d));
}

TwoModeState twin_fock_input(int total, int cutoff, bool exchange_modes) {
  if (total < 0) throw CutoffError("twin_fock_input: total photon number must be nonnegative");
  const int high = (total + 1) / 2;
  const int low = total / 2;
  if (high >= cutoff) {
    throw CutoffError("twin_fock_input: N=" + std::to_string(total) + " needs cutoff > " +
                      std::to_string(high));
  }
  const int na = exchange_modes ? low : high;
  const int nb = exchange_modes ? high : low;
  return tensor(number_state(na, cutoff), number_state(nb, cutoff));
}

TwoModeState noon_state(int total, int cutoff, DegenerateNoon degenerate) {
  if (total < 0) throw CutoffError("noon_state: total photon number must be nonnegative");
  if (total >= cutoff) {
    throw CutoffError("noon_state: N=" + std::to_string(total) + " needs cutoff > " +
                      std::to_string(total));
  }
  if (total == 0 && degenerate == DegenerateNoon::reject) {
    throw CutoffError("noon_state: N=0 is degenerate");
  }
  Eigen::MatrixXcd grid = Eigen::MatrixXcd::Zero(cutoff, cutoff);
  grid(total, 0) += 1.0;
  grid(0, total) += 1.0;
  return TwoModeState::from_amplitudes(std::move(grid));
}

std::pair<SingleModeState, SingleModeState> optimal_mean_factors(double mean_total, int cutoff,
                                                                 const FactoryOptions& options) {
  if (!(mean_total >= 0.0)) {
    throw std::invalid_argument("optimal_mean_input: mean photon number must be >= 0");
  }
  if (mean_total < kDegenerateMean) {
    return {number_state(0, cutoff), number_state(0, cutoff)};
  }
  const double r = SqueezeSpec::for_mean_photons(mean_total / 2.0).r();
  auto a = squeezed_vacuum(SqueezeSpec::real(-r), cutoff, options);
  auto b = squeezed_vacuum(SqueezeSpec::real(r), a.cutoff(), options);
  return {std::move(a), std::move(b)};
}

TwoModeState optimal_mean_input(double mean_total, int cutoff, const FactoryOptions& options) {
  auto [a, b] = optimal_mean_factors(mean_total, cutoff, options);
  return tensor(a, b);
}

}  // namespace qfi
