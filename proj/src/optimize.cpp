#include "qfi/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <ceres/gradient_problem.h>
#include <ceres/gradient_problem_solver.h>

#include "parallel.hpp"
#include "qfi/fisher.hpp"

namespace qfi {

// ---------------------------------------------------------------------------
// Fixed total photon number

long long fixed_total_closed_form(int total) {
  const long long n = total;
  return n % 2 == 0 ? n * (n + 2) / 2 : (n * (n + 2) - 1) / 2;
}

FixedTotalOptimum fixed_total_best(int total) {
  if (total < 0) throw std::invalid_argument("fixed_total_best: N must be >= 0");
  FixedTotalOptimum best;
  best.qfi_max = -1;
  for (long long n = 0; n <= total; ++n) {
    const long long value = 2 * n * (total - n) + total;
    if (value > best.qfi_max) {
      best.qfi_max = value;
      best.maximizers.assign(1, static_cast<int>(n));
    } else if (value == best.qfi_max) {
      best.maximizers.push_back(static_cast<int>(n));
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Fixed mean photon numbers

double split_optimum_qfi(double mean_a, double mean_b) {
  if (mean_a < 0.0 || mean_b < 0.0) {
    throw std::invalid_argument("split_optimum_qfi: mean photon numbers must be >= 0");
  }
  return 2.0 * mean_a * mean_b + mean_a + mean_b +
         2.0 * std::sqrt(mean_a * (mean_a + 1.0) * mean_b * (mean_b + 1.0));
}

SplitScan equal_split_is_best(double total, int grid_points) {
  if (grid_points < 3) throw std::invalid_argument("equal_split_is_best: grid must have >= 3 points");
  if (total < 0.0) throw std::invalid_argument("equal_split_is_best: N must be >= 0");

  SplitScan scan;
  scan.equal_split_value = split_optimum_qfi(total / 2.0, total / 2.0);
  scan.closed_form = total * (total + 2.0);
  scan.worst_margin = std::numeric_limits<double>::infinity();
  scan.peak_value = -1.0;

  const double spacing = total / (grid_points - 1);
  for (int i = 0; i < grid_points; ++i) {
    const double na = i == grid_points - 1 ? total : i * spacing;
    const double value = split_optimum_qfi(na, std::max(0.0, total - na));
    if (value > scan.peak_value) {
      scan.peak_value = value;
      scan.peak_mean_a = na;
    }
    scan.worst_margin = std::min(scan.worst_margin, scan.equal_split_value - value);
  }
  const double tolerance = 1e-12 * std::max(1.0, scan.equal_split_value);
  scan.equal_split_best = scan.worst_margin >= -tolerance &&
                          std::abs(scan.peak_mean_a - total / 2.0) <= spacing / 2.0 + 1e-15;
  return scan;
}

QuadratureBound quadrature_bound_check(const ModeMoments& m) {
  QuadratureBound q;
  const double diff = m.quad_p2 - m.quad_x2;
  q.lhs = diff * diff;
  q.rhs = 4.0 * m.number * (m.number + 1.0);
  q.slack = q.rhs - q.lhs;
  if (q.slack < -1e-8) {
    throw InvariantViolation("quadrature_bound_check: (<p^2>-<x^2>)^2 exceeds 4N(N+1) by " +
                             std::to_string(-q.slack));
  }
  return q;
}

// ---------------------------------------------------------------------------
// Mean photon number projection

namespace {

// Mean photon number of |c_n|^2 e^{2 n u}, normalized, evaluated stably.
double tilted_mean(const Eigen::VectorXcd& c, double u) {
  double top = -std::numeric_limits<double>::infinity();
  for (Eigen::Index n = 0; n < c.size(); ++n) {
    if (std::norm(c(n)) > 0.0) top = std::max(top, std::log(std::norm(c(n))) + 2.0 * n * u);
  }
  double z = 0.0, first = 0.0;
  for (Eigen::Index n = 0; n < c.size(); ++n) {
    if (std::norm(c(n)) == 0.0) continue;
    const double w = std::exp(std::log(std::norm(c(n))) + 2.0 * n * u - top);
    z += w;
    first += n * w;
  }
  return first / z;
}

Eigen::VectorXcd tilted(const Eigen::VectorXcd& c, double u) {
  Eigen::VectorXcd out(c.size());
  // Scale relative to the largest factor to avoid overflow for large |u|.
  const double shift = u > 0.0 ? (c.size() - 1) * u : 0.0;
  for (Eigen::Index n = 0; n < c.size(); ++n) out(n) = c(n) * std::exp(n * u - shift);
  return out;
}

// Solves f(u) = target for increasing f on [lo, hi] by bisection.
template <typename F>
std::optional<double> solve_increasing(F f, double target, double lo = -40.0, double hi = 40.0) {
  const double f_lo = f(lo);
  const double f_hi = f(hi);
  if (target < f_lo - 1e-12 || target > f_hi + 1e-12) return std::nullopt;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < target ? lo : hi) = mid;
    if (hi - lo < 1e-15) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::optional<SingleModeState> with_mean_photons(const SingleModeState& state, double mean) {
  const auto& c = state.amplitudes();
  const auto u = solve_increasing([&](double x) { return tilted_mean(c, x); }, mean);
  if (!u) return std::nullopt;
  return SingleModeState::from_amplitudes(tilted(c, *u), state.truncation_tail());
}

std::optional<std::pair<SingleModeState, SingleModeState>> with_total_mean_photons(
    const SingleModeState& a, const SingleModeState& b, double total) {
  const auto& ca = a.amplitudes();
  const auto& cb = b.amplitudes();
  const auto u = solve_increasing(
      [&](double x) { return tilted_mean(ca, x) + tilted_mean(cb, x); }, total);
  if (!u) return std::nullopt;
  return std::make_pair(SingleModeState::from_amplitudes(tilted(ca, *u), a.truncation_tail()),
                        SingleModeState::from_amplitudes(tilted(cb, *u), b.truncation_tail()));
}

// ---------------------------------------------------------------------------
// Penalty objective

namespace {

// Normalized moments of one raw amplitude vector v and the Wirtinger
// derivatives d z / d conj(v) of z = v^dag X v / v^dag v for X = a, a^2, N.
struct RawMoments {
  double norm_sq = 0.0;
  Complex mean, pair;
  double number = 0.0;
};

RawMoments raw_moments(const Eigen::VectorXcd& v) {
  RawMoments m;
  m.norm_sq = v.squaredNorm();
  for (Eigen::Index n = 0; n < v.size(); ++n) {
    m.number += n * std::norm(v(n));
    if (n >= 1) m.mean += std::conj(v(n - 1)) * std::sqrt(double(n)) * v(n);
    if (n >= 2) m.pair += std::conj(v(n - 2)) * std::sqrt(double(n) * (n - 1)) * v(n);
  }
  m.mean /= m.norm_sq;
  m.pair /= m.norm_sq;
  m.number /= m.norm_sq;
  return m;
}

// 2 dF/d conj(v) given the partials of F with respect to the complex moments
// z1 = <a>, z2 = <aa> (w1 = dF/dz1, w2 = dF/dz2) and the real dF/dN.
Eigen::VectorXcd raw_gradient(const Eigen::VectorXcd& v, const RawMoments& m, Complex w1,
                              Complex w2, double w_number) {
  const Eigen::Index d = v.size();
  Eigen::VectorXcd g = Eigen::VectorXcd::Zero(d);
  for (Eigen::Index n = 0; n < d; ++n) {
    // (X v)_n and (X^dag v)_n for X = a, a^2, N.
    const Complex av = n + 1 < d ? std::sqrt(double(n + 1)) * v(n + 1) : Complex(0.0);
    const Complex adv = n >= 1 ? std::sqrt(double(n)) * v(n - 1) : Complex(0.0);
    const Complex a2v = n + 2 < d ? std::sqrt(double(n + 1) * (n + 2)) * v(n + 2) : Complex(0.0);
    const Complex a2dv = n >= 2 ? std::sqrt(double(n) * (n - 1)) * v(n - 2) : Complex(0.0);
    Complex acc = w1 * (av - m.mean * v(n)) + std::conj(w1) * (adv - std::conj(m.mean) * v(n));
    acc += w2 * (a2v - m.pair * v(n)) + std::conj(w2) * (a2dv - std::conj(m.pair) * v(n));
    acc += w_number * (double(n) * v(n) - m.number * v(n));
    g(n) = 2.0 * acc / m.norm_sq;
  }
  return g;
}

}  // namespace

PenaltyObjective::PenaltyObjective(int cutoff, double target_mean, double penalty)
    : cutoff_(cutoff), target_(target_mean), penalty_(penalty) {
  if (cutoff < 1) throw DimensionError("PenaltyObjective: cutoff must be positive");
}

double PenaltyObjective::evaluate(std::span<const double> x, std::span<double> gradient) const {
  const int d = cutoff_;
  if (static_cast<int>(x.size()) != 4 * d) throw DimensionError("PenaltyObjective: bad parameter count");
  Eigen::VectorXcd va(d), vb(d);
  for (int n = 0; n < d; ++n) {
    va(n) = Complex(x[n], x[d + n]);
    vb(n) = Complex(x[2 * d + n], x[3 * d + n]);
  }
  const RawMoments a = raw_moments(va);
  const RawMoments b = raw_moments(vb);

  const double residual = a.number + b.number - target_;
  // Written with conj pairs folded: -<a+a+><bb> - <aa><b+b+> = -2 Re(conj(<aa>) <bb>).
  const double value =
      2.0 * a.number * b.number + a.number + b.number - 2.0 * (std::conj(a.pair) * b.pair).real() -
      2.0 * std::norm(a.mean) * std::norm(b.mean) +
      2.0 * (std::conj(a.mean * a.mean) * b.mean * b.mean).real() - penalty_ * residual * residual;

  if (!gradient.empty()) {
    if (static_cast<int>(gradient.size()) != 4 * d) {
      throw DimensionError("PenaltyObjective: bad gradient size");
    }
    const double dpen = -2.0 * penalty_ * residual;
    // dF/d<a> = -2 conj(<a>) |<b>|^2 + 2 <a> conj(<b>)^2, dF/d<aa> = -conj(<bb>).
    const Complex w1a = -2.0 * std::conj(a.mean) * std::norm(b.mean) +
                        2.0 * a.mean * std::conj(b.mean) * std::conj(b.mean);
    const Complex w1b = -2.0 * std::conj(b.mean) * std::norm(a.mean) +
                        2.0 * b.mean * std::conj(a.mean) * std::conj(a.mean);
    const Eigen::VectorXcd ga =
        raw_gradient(va, a, w1a, -std::conj(b.pair), 2.0 * b.number + 1.0 + dpen);
    const Eigen::VectorXcd gb =
        raw_gradient(vb, b, w1b, -std::conj(a.pair), 2.0 * a.number + 1.0 + dpen);
    for (int n = 0; n < d; ++n) {
      gradient[n] = ga(n).real();
      gradient[d + n] = ga(n).imag();
      gradient[2 * d + n] = gb(n).real();
      gradient[3 * d + n] = gb(n).imag();
    }
  }
  return value;
}

std::pair<SingleModeState, SingleModeState> PenaltyObjective::decode(std::span<const double> x) const {
  const int d = cutoff_;
  Eigen::VectorXcd va(d), vb(d);
  for (int n = 0; n < d; ++n) {
    va(n) = Complex(x[n], x[d + n]);
    vb(n) = Complex(x[2 * d + n], x[3 * d + n]);
  }
  return {SingleModeState::from_amplitudes(std::move(va)),
          SingleModeState::from_amplitudes(std::move(vb))};
}

std::vector<double> PenaltyObjective::encode(const SingleModeState& a, const SingleModeState& b) {
  const int d = a.cutoff();
  if (b.cutoff() != d) throw DimensionError("PenaltyObjective::encode: cutoffs differ");
  std::vector<double> x(4 * d);
  for (int n = 0; n < d; ++n) {
    x[n] = a[n].real();
    x[d + n] = a[n].imag();
    x[2 * d + n] = b[n].real();
    x[3 * d + n] = b[n].imag();
  }
  return x;
}

// ---------------------------------------------------------------------------
// Search

namespace {

class NegatedObjective final : public ceres::FirstOrderFunction {
 public:
  explicit NegatedObjective(const PenaltyObjective& objective) : objective_(objective) {}

  bool Evaluate(const double* parameters, double* cost, double* gradient) const override {
    const std::span<const double> x(parameters, objective_.num_parameters());
    if (gradient != nullptr) {
      std::span<double> g(gradient, objective_.num_parameters());
      *cost = -objective_.evaluate(x, g);
      for (double& gi : g) gi = -gi;
    } else {
      *cost = -objective_.evaluate(x);
    }
    return std::isfinite(*cost);
  }

  int NumParameters() const override { return objective_.num_parameters(); }

 private:
  const PenaltyObjective& objective_;
};

struct RestartOutcome {
  RestartRecord record;
  std::optional<SingleModeState> a, b;
};

double odd_mass(const SingleModeState& s) {
  double mass = 0.0;
  for (int n = 1; n < s.cutoff(); n += 2) mass += std::norm(s[n]);
  return mass;
}

RestartOutcome run_restart(double mean_total, int cutoff, const SearchConfig& config,
                           std::uint64_t seed) {
  RestartOutcome out;
  out.record.seed = seed;

  // Random normalized start, pulled to the target mean so the penalty starts small.
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  auto random_mode = [&] {
    Eigen::VectorXcd v(cutoff);
    for (int n = 0; n < cutoff; ++n) v(n) = Complex(normal(rng), normal(rng));
    return SingleModeState::from_amplitudes(std::move(v));
  };
  SingleModeState a0 = random_mode();
  SingleModeState b0 = random_mode();
  if (auto moved = with_total_mean_photons(a0, b0, mean_total)) {
    a0 = moved->first;
    b0 = moved->second;
  }

  PenaltyObjective objective(cutoff, mean_total, config.penalty_schedule.front());
  std::vector<double> x = PenaltyObjective::encode(a0, b0);

  ceres::GradientProblemSolver::Options options;
  options.line_search_direction_type = ceres::LBFGS;
  options.max_num_iterations = config.max_iterations_per_stage;
  options.function_tolerance = 1e-15;
  options.gradient_tolerance = config.gradient_tolerance;
  options.parameter_tolerance = 1e-15;
  options.logging_type = ceres::SILENT;
  options.minimizer_progress_to_stdout = false;

  for (double penalty : config.penalty_schedule) {
    objective.set_penalty(penalty);
    ceres::GradientProblem problem(new NegatedObjective(objective));
    ceres::GradientProblemSolver::Summary summary;
    ceres::Solve(options, problem, x.data(), &summary);
    out.record.iterations += static_cast<int>(summary.iterations.size());
  }

  std::vector<double> grad(x.size());
  objective.evaluate(x, grad);
  double gnorm = 0.0;
  double xnorm = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    gnorm += grad[i] * grad[i];
    xnorm += x[i] * x[i];
  }
  // The objective is scale invariant; report the gradient for unit-norm modes.
  out.record.gradient_norm = std::sqrt(gnorm * xnorm / 2.0);

  auto [a, b] = objective.decode(x);
  const double residual = moments(a).number + moments(b).number - mean_total;
  out.record.constraint_residual = residual;
  out.record.converged = std::abs(residual) <= config.converged_constraint ||
                         out.record.gradient_norm <= config.converged_gradient;

  auto projected = with_total_mean_photons(a, b, mean_total);
  if (!projected) {
    out.record.note = "mean photon number unreachable by rescaling";
    return out;
  }
  const auto& [pa, pb] = *projected;
  out.record.qfi = qfi_product(moments(pa), moments(pb)).qfi;
  out.record.rescored_qfi = qfi_variance(tensor(pa, pb)).qfi;

  const double bound = mean_total * (mean_total + 2.0);
  const double scale = std::max(1.0, out.record.qfi);
  if (std::abs(out.record.rescored_qfi - out.record.qfi) > config.rescore_tolerance * scale) {
    out.record.note = "re-scored QFI disagrees with the moment form";
  } else if (out.record.rescored_qfi > bound * (1.0 + 1e-6)) {
    out.record.note = "candidate exceeds N(N+2)";
  } else if (!out.record.converged) {
    out.record.note = "not converged";
  } else {
    out.record.accepted = true;
  }
  out.a = pa;
  out.b = pb;
  return out;
}

}  // namespace

SearchResult mean_constrained_search(double mean_total, int cutoff, const SearchConfig& config) {
  if (config.restarts < 1) throw std::invalid_argument("mean_constrained_search: restarts must be >= 1");
  if (config.penalty_schedule.empty()) {
    throw std::invalid_argument("mean_constrained_search: empty penalty schedule");
  }
  if (!(mean_total >= 0.0)) throw std::invalid_argument("mean_constrained_search: N must be >= 0");
  if (cutoff < 1) throw DimensionError("mean_constrained_search: cutoff must be positive");

  SearchResult result;
  result.bound = mean_total * (mean_total + 2.0);

  if (mean_total < 1e-9) {
    SingleModeState vac = SingleModeState::from_amplitudes(Eigen::VectorXcd::Unit(cutoff, 0));
    result.converged = true;
    result.best_a = vac;
    result.best_b = vac;
    result.best_input = tensor(vac, vac);
    result.message = "degenerate mean photon number: vacuum";
    return result;
  }
  if (mean_total >= 2.0 * (cutoff - 1)) {
    throw TruncationError("mean_constrained_search: mean photon number " +
                              std::to_string(mean_total) + " is not representable below cutoff " +
                              std::to_string(cutoff),
                          static_cast<int>(std::ceil(mean_total / 2.0)) + 2, 1.0);
  }

  auto outcomes = detail::parallel_map<RestartOutcome>(
      static_cast<std::size_t>(config.restarts),
      [&](std::size_t i) { return run_restart(mean_total, cutoff, config, config.seed + i); },
      config.threads);

  int best = -1;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    result.history.push_back(outcomes[i].record);
    if (!outcomes[i].record.accepted) continue;
    if (best < 0 || outcomes[i].record.qfi > outcomes[best].record.qfi) best = static_cast<int>(i);
  }
  if (best < 0) {
    result.converged = false;
    result.message = "no restart converged to an accepted candidate";
    return result;
  }
  const auto& winner = outcomes[best];
  result.converged = true;
  result.best_qfi = winner.record.qfi;
  result.rescored_qfi = winner.record.rescored_qfi;
  result.best_a = winner.a;
  result.best_b = winner.b;
  result.best_input = tensor(*winner.a, *winner.b);
  result.odd_mass_a = odd_mass(*winner.a);
  result.odd_mass_b = odd_mass(*winner.b);
  result.message = "best of " + std::to_string(config.restarts) + " restarts: restart " +
                   std::to_string(best);
  return result;
}

}  // namespace qfi
