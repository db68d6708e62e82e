#include "qfi/optics.hpp"

#include <cmath>
#include <mutex>
#include <shared_mutex>
#include <vector>

#include <Eigen/Eigenvalues>

namespace qfi {

namespace detail {

// Read-mostly store of per-total block unitaries. Fills are idempotent: a
// block is computed under the writer lock only if it is still missing.
class BlockCache {
 public:
  BlockCache(double angle, BlockMethod method) : angle_(angle), method_(method) {}

  std::shared_ptr<const Eigen::MatrixXcd> get(int total) {
    {
      std::shared_lock lock(mutex_);
      if (total < static_cast<int>(blocks_.size()) && blocks_[total]) return blocks_[total];
    }
    std::unique_lock lock(mutex_);
    if (total >= static_cast<int>(blocks_.size())) blocks_.resize(total + 1);
    if (!blocks_[total]) fill(total);
    return blocks_[total];
  }

 private:
  void fill(int total) {
    if (method_ == BlockMethod::eigendecomposition) {
      blocks_[total] = std::make_shared<const Eigen::MatrixXcd>(by_eigendecomposition(total));
      return;
    }
    // The ladder recursion builds block T from block T-1.
    int first_missing = total;
    while (first_missing > 0 && !blocks_[first_missing - 1]) --first_missing;
    for (int t = first_missing; t <= total; ++t) {
      blocks_[t] = std::make_shared<const Eigen::MatrixXcd>(
          t == 0 ? Eigen::MatrixXcd::Identity(1, 1) : by_ladder(*blocks_[t - 1], t));
    }
  }

  // exp(-i theta G_T) with G_T the tridiagonal block of a^dag b + b^dag a in
  // the basis |n, T-n>: <n+1, T-n-1| G |n, T-n> = sqrt((n+1)(T-n)).
  Eigen::MatrixXcd by_eigendecomposition(int total) const {
    const int dim = total + 1;
    if (dim == 1) return Eigen::MatrixXcd::Identity(1, 1);
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(dim);
    Eigen::VectorXd sub(dim - 1);
    for (int n = 0; n < total; ++n) sub(n) = std::sqrt((n + 1.0) * (total - n));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    const Eigen::MatrixXd& v = solver.eigenvectors();
    Eigen::VectorXcd phases(dim);
    for (int k = 0; k < dim; ++k) {
      phases(k) = std::exp(Complex(0.0, -angle_ * solver.eigenvalues()(k)));
    }
    return v.cast<Complex>() * phases.asDiagonal() * v.transpose().cast<Complex>();
  }

  // |n, T-n> = (sqrt(n) a^dag |n-1, T-n> + sqrt(T-n) b^dag |n, T-n-1>) / T, pushed
  // through B. Each column mixes two columns of block T-1; the map from block
  // T-1 to block T is non-expansive, so roundoff does not grow with T (a
  // single a^dag chain amplifies it combinatorially).
  Eigen::MatrixXcd by_ladder(const Eigen::MatrixXcd& prev, int total) const {
    const Complex c(std::cos(angle_), 0.0);
    const Complex mis(0.0, -std::sin(angle_));
    const int dim = total + 1;
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);

    // (x a^dag + y b^dag) applied to a block-(T-1) vector v (index k = n_a).
    auto raise = [total](const auto& v, Complex x, Complex y) {
      Eigen::VectorXcd w = Eigen::VectorXcd::Zero(total + 1);
      for (int k = 0; k < total; ++k) {
        w(k + 1) += x * std::sqrt(k + 1.0) * v(k);
        w(k) += y * std::sqrt(static_cast<double>(total - k)) * v(k);
      }
      return w;
    };

    for (int n = 0; n < dim; ++n) {
      if (n > 0) out.col(n) += std::sqrt(static_cast<double>(n)) * raise(prev.col(n - 1), c, mis);
      if (n < total) {
        out.col(n) += std::sqrt(static_cast<double>(total - n)) * raise(prev.col(n), mis, c);
      }
      out.col(n) /= static_cast<double>(total);
    }
    return out;
  }

  double angle_;
  BlockMethod method_;
  std::shared_mutex mutex_;
  std::vector<std::shared_ptr<const Eigen::MatrixXcd>> blocks_;
};

}  // namespace detail

BeamSplitter::BeamSplitter(double mixing_angle, BlockMethod method)
    : angle_(mixing_angle),
      method_(method),
      cache_(std::make_shared<detail::BlockCache>(mixing_angle, method)) {}

const BeamSplitter& BeamSplitter::balanced() {
  static const BeamSplitter splitter;
  return splitter;
}

std::shared_ptr<const Eigen::MatrixXcd> BeamSplitter::block_unitary(int total) const {
  return cache_->get(total);
}

TwoModeState BeamSplitter::apply(const TwoModeState& state) const {
  return apply_impl(state, false);
}

TwoModeState BeamSplitter::apply_inverse(const TwoModeState& state) const {
  return apply_impl(state, true);
}

TwoModeState BeamSplitter::apply_impl(const TwoModeState& state, bool inverse) const {
  const int d_in = state.cutoff();
  const int t_max = state.max_populated_total();
  const int d_out = std::max(d_in, t_max + 1);
  const auto& in = state.amplitudes();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d_out, d_out);

  for (int total = 0; total <= t_max; ++total) {
    const int lo = std::max(0, total - d_in + 1);
    const int hi = std::min(total, d_in - 1);
    Eigen::VectorXcd v(hi - lo + 1);
    bool any = false;
    for (int n = lo; n <= hi; ++n) {
      v(n - lo) = in(n, total - n);
      any = any || v(n - lo) != Complex(0.0, 0.0);
    }
    if (!any) continue;

    const auto block = block_unitary(total);
    // G is real symmetric, so B^dagger = conj(B) blockwise.
    Eigen::VectorXcd w = inverse ? Eigen::VectorXcd(block->middleCols(lo, hi - lo + 1).conjugate() * v)
                                 : Eigen::VectorXcd(block->middleCols(lo, hi - lo + 1) * v);
    for (int n = 0; n <= total; ++n) out(n, total - n) = w(n);
  }
  return TwoModeState::from_unitary_output(std::move(out), state.truncation_tail());
}

TwoModeState beam_splitter_apply(const TwoModeState& state) {
  return BeamSplitter::balanced().apply(state);
}

TwoModeState inverse_beam_splitter_apply(const TwoModeState& state) {
  return BeamSplitter::balanced().apply_inverse(state);
}

TwoModeState phase_shift_apply(const TwoModeState& state, const PhaseSetting& phases) {
  const int d = state.cutoff();
  Eigen::VectorXcd ua(d), ub(d);
  for (int n = 0; n < d; ++n) {
    ua(n) = std::exp(Complex(0.0, phases.phi1 * n));
    ub(n) = std::exp(Complex(0.0, phases.phi2 * n));
  }
  Eigen::MatrixXcd out = ua.asDiagonal() * state.amplitudes() * ub.asDiagonal();
  return TwoModeState::from_unitary_output(std::move(out), state.truncation_tail());
}

namespace {

Eigen::MatrixXd recombine(const TwoModeState& shifted, MzConvention convention,
                          const BeamSplitter& splitter) {
  const TwoModeState out = convention == MzConvention::same_B ? splitter.apply(shifted)
                                                              : splitter.apply_inverse(shifted);
  return out.amplitudes().cwiseAbs2();
}

}  // namespace

Eigen::MatrixXd mz_probs_after_splitter(const TwoModeState& after_first, double phi_d,
                                        MzConvention convention, const BeamSplitter& splitter) {
  return recombine(phase_shift_apply(after_first, PhaseSetting::balanced(phi_d)), convention,
                   splitter);
}

Eigen::MatrixXd mz_output_probs(const TwoModeState& input, const PhaseSetting& phases,
                                MzConvention convention, const BeamSplitter& splitter) {
  return recombine(phase_shift_apply(splitter.apply(input), phases), convention, splitter);
}

Eigen::MatrixXd mz_output_probs(const TwoModeState& input, double phi_d, MzConvention convention,
                                const BeamSplitter& splitter) {
  return mz_output_probs(input, PhaseSetting::balanced(phi_d), convention, splitter);
}

}  // namespace qfi
