#pragma once

// Reference solvers for tests and for regenerating expected values:
// cyclic Jacobi eigendecomposition, brute-force search over the unit
// circle/sphere, and enumeration of sign vectors. None of them share code
// with the ascent or recurrent solvers.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "gpca/errors.hpp"
#include "gpca/objective.hpp"

namespace gpca::oracle {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct OracleReport {
  Vector argmax;
  double value = 0.0;
  /// Angular step (grid search) or 0 for exact enumeration.
  double resolution = 0.0;
};

struct EigenPairs {
  /// Descending.
  Vector values;
  /// Column j pairs with values[j].
  Matrix vectors;
};

/// Full eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
inline EigenPairs jacobi_eigen(const Matrix& input, int max_sweeps = 100) {
  const Eigen::Index n = input.rows();
  if (n != input.cols()) throw DimensionError("jacobi_eigen: matrix must be square");
  const double scale = std::max(1.0, input.cwiseAbs().maxCoeff());
  if ((input - input.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw DataError("jacobi_eigen: matrix is not symmetric");
  }

  Matrix a = 0.5 * (input + input.transpose());
  Matrix v = Matrix::Identity(n, n);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off <= 1e-30 * scale * scale) break;

    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i) > a(j, j); });
  EigenPairs out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    out.values[j] = a(order[j], order[j]);
    out.vectors.col(j) = v.col(order[j]);
  }
  return out;
}

/// Top-k eigenpairs in descending eigenvalue order.
inline EigenPairs eig_top(const Matrix& symmetric, Eigen::Index k) {
  if (k < 0 || k > symmetric.rows()) throw ConfigError("eig_top: k out of range");
  EigenPairs all = jacobi_eigen(symmetric);
  all.values.conservativeResize(k);
  all.vectors.conservativeResize(Eigen::NoChange, k);
  return all;
}

namespace detail {

inline double grid_objective(const Matrix& x, const ObjectiveSpec& spec, const Vector& w) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) total += spec.f(x.row(i).dot(w));
  return total;
}

}  // namespace detail

/// Brute-force maximum of sum_i f(w.x_i) over unit w for d in {2, 3}.
/// d = 2 walks the full circle in steps of `resolution` radians; d = 3 uses a
/// polar/azimuth grid with the same angular step.
inline OracleReport sphere_grid_argmax(const Matrix& samples, const ObjectiveSpec& spec,
                                       double resolution) {
  const Eigen::Index d = samples.cols();
  if (d != 2 && d != 3) throw ConfigError("sphere_grid_argmax supports d = 2 or 3 only");
  if (!(resolution > 0.0)) throw ConfigError("sphere_grid_argmax: resolution must be positive");

  OracleReport best;
  best.value = -std::numeric_limits<double>::infinity();
  best.resolution = resolution;
  auto consider = [&](const Vector& w) {
    const double value = detail::grid_objective(samples, spec, w);
    if (value > best.value) {
      best.value = value;
      best.argmax = w;
    }
  };

  constexpr double two_pi = 2.0 * std::numbers::pi;
  if (d == 2) {
    const auto steps = static_cast<std::int64_t>(std::ceil(two_pi / resolution));
    Vector w(2);
    for (std::int64_t s = 0; s < steps; ++s) {
      const double t = static_cast<double>(s) * resolution;
      w << std::cos(t), std::sin(t);
      consider(w);
    }
    return best;
  }
  const auto polar_steps = static_cast<std::int64_t>(std::ceil(std::numbers::pi / resolution));
  Vector w(3);
  for (std::int64_t i = 0; i <= polar_steps; ++i) {
    const double theta = std::min(std::numbers::pi, static_cast<double>(i) * resolution);
    const double ring = std::sin(theta);
    const auto az_steps =
        std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(two_pi * ring / resolution)));
    for (std::int64_t j = 0; j < az_steps; ++j) {
      const double phi = two_pi * static_cast<double>(j) / static_cast<double>(az_steps);
      w << ring * std::cos(phi), ring * std::sin(phi), std::cos(theta);
      consider(w);
    }
  }
  return best;
}

/// Exhaustive maximum of sqrt(c^T K c) over c in {-1, +1}^N, N <= 12.
/// The first maximizer in enumeration order is reported.
inline OracleReport sign_enumerate(const Matrix& k) {
  const Eigen::Index n = k.rows();
  if (n != k.cols()) throw DimensionError("sign_enumerate: matrix must be square");
  if (n < 1 || n > 12) throw ConfigError("sign_enumerate supports 1 <= N <= 12");

  OracleReport best;
  best.value = -std::numeric_limits<double>::infinity();
  Vector c(n);
  const std::uint32_t total = 1u << n;
  for (std::uint32_t mask = 0; mask < total; ++mask) {
    for (Eigen::Index i = 0; i < n; ++i) c[i] = (mask >> i) & 1u ? -1.0 : 1.0;
    const double value = std::sqrt(std::max(0.0, c.dot(k * c)));
    if (value > best.value) {
      best.value = value;
      best.argmax = c;
    }
  }
  return best;
}

}  // namespace gpca::oracle
