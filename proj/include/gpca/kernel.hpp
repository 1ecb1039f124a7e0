#pragma once

// Gram matrices, feature-space centering and per-component deflation.
//
// A deflation step with dual vector c replaces K by K - (Kc)(Kc)^T / (c^T K c).
// Only Kc and c^T K c are kept per step; that is enough to replay the same
// deflation on the kernel vector of a test point.

#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "gpca/errors.hpp"
#include "gpca/objective.hpp"
#include "gpca/pca.hpp"

namespace gpca {

class KernelSpec {
 public:
  enum class Kind { Gaussian, Linear };

  /// exp(-||x - y||^2 / rho^2)
  static KernelSpec gaussian(double rho) {
    if (!(rho > 0.0 && std::isfinite(rho))) throw ConfigError("gaussian kernel needs rho > 0");
    return KernelSpec(Kind::Gaussian, rho);
  }
  static KernelSpec linear() { return KernelSpec(Kind::Linear, 0.0); }

  /// Parses "gaussian:<rho>" or "linear".
  static KernelSpec parse(std::string_view text) {
    if (text == "linear") return linear();
    constexpr std::string_view prefix = "gaussian:";
    if (text.substr(0, prefix.size()) == prefix) {
      return gaussian(detail::parse_positive(text.substr(prefix.size()), "rho"));
    }
    throw ConfigError("unknown kernel '" + std::string(text) +
                      "' (expected gaussian:<rho> or linear)");
  }

  Kind kind() const noexcept { return kind_; }
  double rho() const noexcept { return rho_; }

  template <typename A, typename B>
  double operator()(const Eigen::MatrixBase<A>& x, const Eigen::MatrixBase<B>& y) const {
    if (kind_ == Kind::Linear) return x.dot(y);
    return std::exp(-(x - y).squaredNorm() / (rho_ * rho_));
  }

  std::string to_string() const {
    return kind_ == Kind::Linear ? "linear" : "gaussian:" + detail::format_number(rho_);
  }

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;

 private:
  KernelSpec(Kind kind, double rho) : kind_(kind), rho_(rho) {}

  Kind kind_;
  double rho_;
};

struct DeflationStep {
  Vector c;
  /// K c, with K the Gram matrix this step was extracted against.
  Vector kc;
  /// c^T K c
  double energy = 0.0;
};

struct GramState {
  Matrix K;
  /// Row means and grand mean of the raw Gram matrix (set by center_gram).
  Vector raw_row_means;
  double raw_grand_mean = 0.0;
  bool centered = false;
  std::vector<DeflationStep> history;

  Eigen::Index size() const noexcept { return K.rows(); }

  /// Wraps an existing symmetric matrix, e.g. for tests.
  static GramState from_matrix(Matrix k) {
    if (k.rows() != k.cols()) throw DimensionError("Gram matrix must be square");
    GramState s;
    s.K = std::move(k);
    return s;
  }
};

/// Raw Gram matrix of the rows of `samples`.
inline GramState gram(const Matrix& samples, const KernelSpec& spec) {
  if (samples.rows() < 1) throw DataError("gram: no samples");
  detail::require_finite(samples, "data matrix");
  const Eigen::Index n = samples.rows();
  GramState state;
  if (spec.kind() == KernelSpec::Kind::Linear) {
    state.K = samples * samples.transpose();
    state.K = 0.5 * (state.K + state.K.transpose()).eval();
    return state;
  }
  state.K.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    state.K(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = spec(samples.row(i), samples.row(j));
      state.K(i, j) = v;
      state.K(j, i) = v;
    }
  }
  return state;
}

inline GramState gram(const DataMatrix& data, const KernelSpec& spec) {
  return gram(data.samples, spec);
}

/// K <- K - YK - KY + YKY with Y = ones/N. Records the raw means needed to
/// center test-point kernel vectors.
inline GramState center_gram(GramState state) {
  if (state.centered || !state.history.empty()) {
    throw ConfigError("center_gram: Gram matrix is already centered");
  }
  const Eigen::Index n = state.size();
  state.raw_row_means = state.K.rowwise().mean();
  state.raw_grand_mean = state.raw_row_means.mean();
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      state.K(i, j) += state.raw_grand_mean - state.raw_row_means[i] - state.raw_row_means[j];
    }
  }
  state.centered = true;
  return state;
}

/// K <- K - K c c^T K / c^T K c, appending (c, Kc, c^T K c) to the history.
inline GramState deflate(GramState state, const Vector& c) {
  detail::check_dim(state.size(), c.size(), "deflate");
  DeflationStep step;
  step.c = c;
  step.kc = state.K * c;
  step.energy = c.dot(step.kc);
  const double knorm = state.K.norm();
  if (!(step.energy > 1e-30 * knorm) || knorm == 0.0) {
    throw DeflationError("deflate: component carries no energy (c^T K c = " +
                         detail::format_number(step.energy) + ")");
  }
  const Matrix outer = step.kc * step.kc.transpose();
  state.K -= outer / step.energy;
  state.history.push_back(std::move(step));
  return state;
}

/// Uncentered kernel vector k(x)_j = kernel(x_j, x).
inline Vector raw_kernel_vector(const Matrix& training, const Eigen::Ref<const Vector>& x,
                                const KernelSpec& spec) {
  detail::check_dim(training.cols(), x.size(), "kernel vector");
  Vector k(training.rows());
  for (Eigen::Index j = 0; j < training.rows(); ++j) k[j] = spec(training.row(j).transpose(), x);
  return k;
}

/// Applies the training centering to a raw test kernel vector.
inline Vector center_kernel_vector(const GramState& state, Vector k) {
  if (!state.centered) return k;
  detail::check_dim(state.raw_row_means.size(), k.size(), "center kernel vector");
  const double shift = state.raw_grand_mean - k.mean();
  k -= state.raw_row_means;
  k.array() += shift;
  return k;
}

/// Replays deflation steps [0, stages) on a centered kernel vector.
inline void replay_deflation(const GramState& state, Vector& k, std::size_t stages) {
  for (std::size_t s = 0; s < stages && s < state.history.size(); ++s) {
    const DeflationStep& step = state.history[s];
    k -= step.kc * (step.c.dot(k) / step.energy);
  }
}

/// Test-point kernel vector, centered like the training Gram matrix and
/// deflated through the whole history.
inline Vector test_kernel_vector(const GramState& state, const Eigen::Ref<const Vector>& x,
                                 const Matrix& training, const KernelSpec& spec) {
  detail::check_dim(state.size(), training.rows(), "test kernel vector");
  Vector k = center_kernel_vector(state, raw_kernel_vector(training, x, spec));
  replay_deflation(state, k, state.history.size());
  return k;
}

inline Vector test_kernel_vector(const GramState& state, const Eigen::Ref<const Vector>& x,
                                 const DataMatrix& data, const KernelSpec& spec) {
  return test_kernel_vector(state, x, data.samples, spec);
}

/// Centered self-kernel k(x,x) - 2 mean(k(x)) + mean(K_raw).
inline double centered_self_kernel(const GramState& state, const Vector& raw_k, double kxx) {
  if (!state.centered) return kxx;
  return kxx - 2.0 * raw_k.mean() + state.raw_grand_mean;
}

}  // namespace gpca
