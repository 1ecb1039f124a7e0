#pragma once

// Generalized (non-kernel) PCA: normalized gradient ascent on the unit sphere
//
//   w <- sum_i f'(w.x_i) x_i / || sum_i f'(w.x_i) x_i ||
//
// with greedy extraction of further vectors on deflated data. For convex f
// every step is non-decreasing in sum_i f(w.x_i).

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gpca/errors.hpp"
#include "gpca/objective.hpp"

namespace gpca {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Samples stored as rows, with the subtracted column mean.
struct DataMatrix {
  Matrix samples;
  Vector mean;

  Eigen::Index rows() const noexcept { return samples.rows(); }
  Eigen::Index dim() const noexcept { return samples.cols(); }
};

struct AscentSettings {
  double tol = 1e-8;
  int max_iter = 1000;
  /// Record sum_i f(w.x_i) after every step.
  bool monitor_objective = true;
  /// Seed for the random restart after a degenerate start.
  std::uint64_t seed = 0;

  void validate() const {
    if (!(tol > 0.0)) throw ConfigError("ascent tolerance must be positive");
    if (max_iter < 1) throw ConfigError("max_iter must be at least 1");
  }
};

struct AscentDiagnostics {
  int iterations = 0;
  double objective = 0.0;
  bool converged = false;
  /// Objective never dropped by more than 1e-10 * max(1, |value|) between steps.
  bool monotone = true;
  /// Objective at w0 followed by the value after every step (monitoring only).
  std::vector<double> trace;
};

struct AscentResult {
  Vector w;
  AscentDiagnostics diagnostics;
};

/// Orthonormal principal vectors as the columns of `vectors`, in extraction order.
struct PrincipalBasis {
  Matrix vectors;
  std::vector<AscentDiagnostics> diagnostics;

  Eigen::Index size() const noexcept { return vectors.cols(); }
  Eigen::Index dim() const noexcept { return vectors.rows(); }
  auto vector(Eigen::Index j) const { return vectors.col(j); }

  static PrincipalBasis empty(Eigen::Index dim) {
    PrincipalBasis basis;
    basis.vectors.resize(dim, 0);
    return basis;
  }
};

namespace detail {

inline void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) throw DataError(std::string(what) + " contains non-finite entries");
}

inline double objective_sum(const Matrix& x, const ObjectiveSpec& spec, const Vector& w) {
  const Vector proj = x * w;
  double total = 0.0;
  for (Eigen::Index i = 0; i < proj.size(); ++i) total += spec.f(proj[i]);
  return total;
}

inline Vector ascent_direction(const Matrix& x, const ObjectiveSpec& spec, const Vector& w) {
  Vector proj = x * w;
  for (Eigen::Index i = 0; i < proj.size(); ++i) proj[i] = spec.fprime(proj[i]);
  return x.transpose() * proj;
}

// Largest-magnitude coordinate made positive; ties go to the first index.
inline void canonicalize_sign(Vector& w) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < w.size(); ++i) {
    if (std::abs(w[i]) > std::abs(w[best])) best = i;
  }
  if (w.size() > 0 && w[best] < 0.0) w = -w;
}

inline Vector random_unit(Eigen::Index dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Vector v(dim);
  do {
    for (Eigen::Index i = 0; i < dim; ++i) v[i] = normal(rng);
  } while (v.norm() == 0.0);
  return v.normalized();
}

inline void check_dim(Eigen::Index expected, Eigen::Index got, const char* what) {
  if (expected != got) {
    throw DimensionError(std::string(what) + ": expected dimension " +
                         std::to_string(expected) + ", got " + std::to_string(got));
  }
}

}  // namespace detail

/// Subtracts and stores the column means of `raw` (one sample per row).
inline DataMatrix center(const Matrix& raw) {
  if (raw.rows() < 1 || raw.cols() < 1) throw DataError("data matrix must be non-empty");
  detail::require_finite(raw, "data matrix");
  DataMatrix out;
  out.mean = raw.colwise().mean().transpose();
  out.samples = raw.rowwise() - out.mean.transpose();
  return out;
}

/// Unit vector along the sample with the largest L2 norm (first one on ties).
inline Vector init_direction(const Matrix& samples) {
  Eigen::Index best = -1;
  double best_norm = 0.0;
  for (Eigen::Index i = 0; i < samples.rows(); ++i) {
    const double n = samples.row(i).squaredNorm();
    if (n > best_norm) {
      best_norm = n;
      best = i;
    }
  }
  if (best < 0) throw DegenerateError("all samples are zero; no initial direction");
  return samples.row(best).transpose() / std::sqrt(best_norm);
}

inline Vector init_direction(const DataMatrix& data) { return init_direction(data.samples); }

/// Fixed-point ascent from `w0` on centered samples (rows of `samples`).
/// Non-convergence is reported through the diagnostics, not thrown.
inline AscentResult ascend(const Matrix& samples, const ObjectiveSpec& spec, const Vector& w0,
                           const AscentSettings& settings = {}) {
  settings.validate();
  detail::check_dim(samples.cols(), w0.size(), "ascend");
  if (std::abs(w0.norm() - 1.0) > 1e-8) throw ConfigError("ascend: w0 must have unit norm");

  AscentResult result;
  AscentDiagnostics& diag = result.diagnostics;
  Vector w = w0;
  double previous = 0.0;
  if (settings.monitor_objective) {
    previous = detail::objective_sum(samples, spec, w);
    diag.trace.push_back(previous);
  }

  for (int it = 1; it <= settings.max_iter; ++it) {
    const Vector g = detail::ascent_direction(samples, spec, w);
    const double gnorm = g.norm();
    if (!(gnorm >= 1e-30)) {
      throw DegenerateError("ascent gradient vanished at iteration " + std::to_string(it));
    }
    const Vector next = g / gnorm;
    const double step = (next - w).lpNorm<Eigen::Infinity>();
    w = next;
    diag.iterations = it;
    if (settings.monitor_objective) {
      const double value = detail::objective_sum(samples, spec, w);
      if (value < previous - 1e-10 * std::max(1.0, std::abs(previous))) diag.monotone = false;
      diag.trace.push_back(value);
      previous = value;
    }
    if (step < settings.tol) {
      diag.converged = true;
      break;
    }
  }

  if (spec.is_even()) detail::canonicalize_sign(w);
  diag.objective = settings.monitor_objective ? previous : detail::objective_sum(samples, spec, w);
  result.w = std::move(w);
  return result;
}

inline AscentResult ascend(const DataMatrix& data, const ObjectiveSpec& spec, const Vector& w0,
                           const AscentSettings& settings = {}) {
  return ascend(data.samples, spec, w0, settings);
}

namespace detail {

// Greedy extraction. With allow_partial the basis found so far is returned
// when the deflated data runs out of energy instead of throwing.
inline PrincipalBasis fit_greedy(const Matrix& samples, const ObjectiveSpec& spec,
                                 Eigen::Index k, const AscentSettings& settings,
                                 bool allow_partial) {
  settings.validate();
  const Eigen::Index d = samples.cols();
  if (k < 1 || k > std::min(d, samples.rows())) {
    throw ConfigError("fit: need 1 <= k <= min(d, N), got k=" + std::to_string(k));
  }
  require_finite(samples, "data matrix");

  Matrix work = samples;
  const double scale = samples.norm();
  PrincipalBasis basis = PrincipalBasis::empty(d);
  basis.vectors.resize(d, k);

  Eigen::Index found = 0;
  for (; found < k; ++found) {
    if (scale == 0.0 || work.norm() <= 1e-10 * scale) break;

    AscentResult res;
    try {
      res = ascend(work, spec, init_direction(work), settings);
    } catch (const DegenerateError&) {
      // one retry from a seeded random direction inside the remaining subspace
      Vector w = random_unit(d, settings.seed + static_cast<std::uint64_t>(found));
      if (found > 0) w -= basis.vectors.leftCols(found) * (basis.vectors.leftCols(found).transpose() * w);
      if (w.norm() == 0.0) throw;
      res = ascend(work, spec, w.normalized(), settings);
    }

    Vector w = res.w;
    for (int pass = 0; pass < 2 && found > 0; ++pass) {
      const auto prev = basis.vectors.leftCols(found);
      w -= prev * (prev.transpose() * w);
    }
    const double wn = w.norm();
    if (!(wn > 0.5)) break;  // ascent collapsed into the span already extracted
    w /= wn;
    if (spec.is_even()) canonicalize_sign(w);

    basis.vectors.col(found) = w;
    basis.diagnostics.push_back(std::move(res.diagnostics));
    const Vector proj = work * w;
    work.noalias() -= proj * w.transpose();
  }

  if (found < k) {
    if (!allow_partial) {
      throw RankDeficiencyError("fit: data exhausted after " + std::to_string(found) + " of " +
                                    std::to_string(k) + " principal vectors",
                                static_cast<std::size_t>(found));
    }
    basis.vectors.conservativeResize(d, found);
  }
  return basis;
}

}  // namespace detail

/// Greedy extraction of k principal vectors. Throws RankDeficiencyError when
/// the deflated data vanishes before k vectors are found.
inline PrincipalBasis fit(const DataMatrix& data, const ObjectiveSpec& spec, Eigen::Index k,
                          const AscentSettings& settings = {}) {
  return detail::fit_greedy(data.samples, spec, k, settings, false);
}

/// Components (w_1.x, ..., w_k.x). `x` must already have the training mean removed.
inline Vector project(const PrincipalBasis& basis, const Eigen::Ref<const Vector>& x) {
  detail::check_dim(basis.dim(), x.size(), "project");
  return basis.vectors.transpose() * x;
}

inline Vector reconstruct(const PrincipalBasis& basis, const Eigen::Ref<const Vector>& x) {
  detail::check_dim(basis.dim(), x.size(), "reconstruct");
  return basis.vectors * (basis.vectors.transpose() * x);
}

/// Squared L2 distance between x and its projection onto the basis span.
inline double reconstruction_error(const PrincipalBasis& basis, const Eigen::Ref<const Vector>& x) {
  return (x - reconstruct(basis, x)).squaredNorm();
}

}  // namespace gpca
