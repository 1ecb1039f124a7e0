#pragma once

// Generalized kernel PCA as a recurrent fixed point in the dual coefficients:
//
//   c <- f'( K c / sqrt(c^T K c) )      (f' applied entrywise)
//
// f(x) = x^2 reduces this to power iteration on K; f(x) = |x| gives the
// Hopfield update c <- sign(Kc). The serial mode updates one coordinate at a
// time using the freshest c, which cannot cycle for the sign case.

#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "gpca/errors.hpp"
#include "gpca/kernel.hpp"
#include "gpca/objective.hpp"
#include "gpca/pca.hpp"

namespace gpca {

enum class SolveMode { Parallel, Serial, Auto };

inline SolveMode parse_mode(std::string_view text) {
  if (text == "parallel") return SolveMode::Parallel;
  if (text == "serial") return SolveMode::Serial;
  if (text == "auto") return SolveMode::Auto;
  throw ConfigError("unknown mode '" + std::string(text) + "' (expected parallel|serial|auto)");
}

inline std::string to_string(SolveMode mode) {
  switch (mode) {
    case SolveMode::Parallel: return "parallel";
    case SolveMode::Serial: return "serial";
    case SolveMode::Auto: return "auto";
  }
  return {};
}

struct DualComponent {
  Vector c;
  /// sqrt(c^T K c) at the returned c.
  double normalizer = 0.0;
  bool converged = false;
  /// Parallel steps or serial sweeps, summed over a parallel->serial restart.
  int iterations = 0;
  bool cycle_detected = false;
  SolveMode mode_used = SolveMode::Parallel;
  /// sqrt(c^T K c) after every accepted serial coordinate update.
  std::vector<double> energy_trace;
};

struct KernelModel {
  GramState gram;
  std::vector<DualComponent> components;
  ObjectiveSpec objective = ObjectiveSpec::lp(2.0);
  KernelSpec kernel = KernelSpec::linear();
  Matrix training;

  Eigen::Index size() const noexcept { return static_cast<Eigen::Index>(components.size()); }
};

/// Indicator of the largest diagonal entry of K (first one on ties).
inline Vector init_dual(const GramState& state) {
  const Eigen::Index n = state.size();
  Eigen::Index best = -1;
  double best_value = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (state.K(i, i) > best_value) {
      best_value = state.K(i, i);
      best = i;
    }
  }
  if (best < 0) throw DegenerateError("init_dual: no positive diagonal entry in K");
  Vector c = Vector::Zero(n);
  c[best] = 1.0;
  return c;
}

namespace detail {

inline double dual_energy(const Matrix& k, const Vector& c) { return c.dot(k * c); }

inline void require_positive_energy(double energy) {
  if (!(energy > 0.0)) {
    throw DegenerateError("c^T K c = " + format_number(energy) +
                          " is not positive; the direction carries no feature-space energy");
  }
}

// Entrywise f' map of a scaled argument. For the sign objective a zero
// argument keeps the previous coefficient.
inline double dual_update(const ObjectiveSpec& spec, double arg, double previous) {
  if (spec.is_sign() && arg == 0.0) return previous;
  return spec.fprime(arg);
}

struct ParallelRun {
  Vector c;
  int iterations = 0;
  bool converged = false;
  bool cycle = false;
};

inline ParallelRun run_parallel(const GramState& state, const ObjectiveSpec& spec,
                                const AscentSettings& settings, Vector c, bool stop_on_cycle) {
  ParallelRun run;
  Vector before_previous;
  for (int it = 1; it <= settings.max_iter; ++it) {
    const Vector kc = state.K * c;
    const double energy = c.dot(kc);
    require_positive_energy(energy);
    const double scale = 1.0 / std::sqrt(energy);
    Vector next(c.size());
    for (Eigen::Index i = 0; i < c.size(); ++i) next[i] = dual_update(spec, kc[i] * scale, c[i]);

    const double step = (next - c).lpNorm<Eigen::Infinity>();
    run.iterations = it;
    if (step < settings.tol) {
      run.c = std::move(next);
      run.converged = true;
      return run;
    }
    if (before_previous.size() == next.size() &&
        (next - before_previous).lpNorm<Eigen::Infinity>() < settings.tol) {
      run.cycle = true;
      if (stop_on_cycle) {
        run.c = std::move(next);
        return run;
      }
    }
    before_previous = std::move(c);
    c = std::move(next);
  }
  run.c = std::move(c);
  return run;
}

inline DualComponent run_serial(const GramState& state, const ObjectiveSpec& spec,
                                const AscentSettings& settings, Vector c) {
  DualComponent out;
  out.mode_used = SolveMode::Serial;
  const Eigen::Index n = c.size();
  const bool discrete = spec.is_sign();
  const int max_sweeps = discrete ? static_cast<int>(100 * n) : settings.max_iter;

  Vector kc = state.K * c;
  double energy = c.dot(kc);
  require_positive_energy(energy);
  if (settings.monitor_objective) out.energy_trace.push_back(std::sqrt(energy));

  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    double largest_change = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      require_positive_energy(energy);
      const double updated = dual_update(spec, kc[i] / std::sqrt(energy), c[i]);
      const double delta = updated - c[i];
      if (delta == 0.0) continue;
      energy += 2.0 * delta * kc[i] + delta * delta * state.K(i, i);
      kc += delta * state.K.col(i);
      c[i] = updated;
      largest_change = std::max(largest_change, std::abs(delta));
      if (settings.monitor_objective) out.energy_trace.push_back(std::sqrt(std::max(energy, 0.0)));
    }
    // drop accumulated round-off from the incremental updates
    kc = state.K * c;
    energy = c.dot(kc);
    out.iterations = sweep;
    if (discrete ? largest_change == 0.0 : largest_change < settings.tol) {
      out.converged = true;
      break;
    }
  }
  require_positive_energy(energy);
  out.normalizer = std::sqrt(energy);
  out.c = std::move(c);
  return out;
}

}  // namespace detail

/// One recurrent step f'(Kc / sqrt(c^T K c)).
inline Vector iterate_parallel(const GramState& state, const ObjectiveSpec& spec, const Vector& c) {
  detail::check_dim(state.size(), c.size(), "iterate_parallel");
  const Vector kc = state.K * c;
  const double energy = c.dot(kc);
  detail::require_positive_energy(energy);
  const double scale = 1.0 / std::sqrt(energy);
  Vector out(c.size());
  for (Eigen::Index i = 0; i < c.size(); ++i) out[i] = spec.fprime(kc[i] * scale);
  return out;
}

/// Solves for one dual component starting from init_dual. Auto runs the
/// parallel map and falls back to serial sweeps when it detects a 2-cycle.
inline DualComponent solve_component(const GramState& state, const ObjectiveSpec& spec,
                                     const AscentSettings& settings = {},
                                     SolveMode mode = SolveMode::Auto) {
  settings.validate();
  const Vector c0 = init_dual(state);
  if (mode == SolveMode::Serial) return detail::run_serial(state, spec, settings, c0);

  detail::ParallelRun run =
      detail::run_parallel(state, spec, settings, c0, mode == SolveMode::Auto);
  if (mode == SolveMode::Auto && run.cycle) {
    DualComponent serial = detail::run_serial(state, spec, settings, c0);
    serial.cycle_detected = true;
    serial.iterations += run.iterations;
    return serial;
  }
  DualComponent out;
  out.mode_used = SolveMode::Parallel;
  out.converged = run.converged;
  out.cycle_detected = run.cycle;
  out.iterations = run.iterations;
  const double energy = detail::dual_energy(state.K, run.c);
  detail::require_positive_energy(energy);
  out.normalizer = std::sqrt(energy);
  out.c = std::move(run.c);
  return out;
}

namespace detail {

inline KernelModel fit_kernel_greedy(const Matrix& samples, const KernelSpec& kspec,
                                     const ObjectiveSpec& spec, Eigen::Index k,
                                     const AscentSettings& settings, SolveMode mode,
                                     bool allow_partial) {
  if (k < 1 || k > samples.rows()) {
    throw ConfigError("fit_kernel: need 1 <= k <= N, got k=" + std::to_string(k));
  }
  KernelModel model;
  model.objective = spec;
  model.kernel = kspec;
  model.training = samples;
  model.gram = center_gram(gram(samples, kspec));

  const double initial_diag = model.gram.K.diagonal().maxCoeff();
  for (Eigen::Index m = 0; m < k; ++m) {
    if (!(initial_diag > 0.0) || model.gram.K.diagonal().maxCoeff() <= 1e-12 * initial_diag) {
      if (allow_partial) break;
      throw RankDeficiencyError("fit_kernel: Gram matrix exhausted after " + std::to_string(m) +
                                    " of " + std::to_string(k) + " components",
                                static_cast<std::size_t>(m));
    }
    DualComponent comp;
    try {
      comp = solve_component(model.gram, spec, settings, mode);
      model.gram = deflate(std::move(model.gram), comp.c);
    } catch (const Error& e) {
      if (!allow_partial) {
        throw RankDeficiencyError("fit_kernel: stopped after " + std::to_string(m) + " of " +
                                      std::to_string(k) + " components: " + e.what(),
                                  static_cast<std::size_t>(m));
      }
      break;
    }
    model.components.push_back(std::move(comp));
  }
  return model;
}

}  // namespace detail

/// Center the Gram matrix, then k times: solve a component, store it, deflate.
inline KernelModel fit_kernel(const Matrix& samples, const KernelSpec& kspec,
                              const ObjectiveSpec& spec, Eigen::Index k,
                              const AscentSettings& settings = {},
                              SolveMode mode = SolveMode::Auto) {
  settings.validate();
  return detail::fit_kernel_greedy(samples, kspec, spec, k, settings, mode, false);
}

inline KernelModel fit_kernel(const DataMatrix& data, const KernelSpec& kspec,
                              const ObjectiveSpec& spec, Eigen::Index k,
                              const AscentSettings& settings = {},
                              SolveMode mode = SolveMode::Auto) {
  return fit_kernel(data.samples, kspec, spec, k, settings, mode);
}

struct KernelProjection {
  Vector scores;
  /// Centered self-kernel k~(x, x).
  double self_kernel = 0.0;
};

/// Scores beta_m = c_m^T k~_m(x) / sqrt(c_m^T K_m c_m), where k~_m is the
/// centered test kernel vector deflated through components 0..m-1.
inline KernelProjection kernel_projection(const KernelModel& model,
                                          const Eigen::Ref<const Vector>& x) {
  const Vector raw = raw_kernel_vector(model.training, x, model.kernel);
  Vector k = center_kernel_vector(model.gram, raw);
  KernelProjection out;
  out.scores.resize(model.size());
  for (Eigen::Index m = 0; m < model.size(); ++m) {
    const DeflationStep& step = model.gram.history[static_cast<std::size_t>(m)];
    const double dot = step.c.dot(k);
    out.scores[m] = dot / std::sqrt(step.energy);
    k -= step.kc * (dot / step.energy);
  }
  out.self_kernel = centered_self_kernel(model.gram, raw, model.kernel(x, x));
  return out;
}

inline Vector kernel_project(const KernelModel& model, const Eigen::Ref<const Vector>& x) {
  return kernel_projection(model, x).scores;
}

/// Feature-space residual k~(x,x) - sum_m beta_m^2, clamped at 0 for round-off.
inline double kernel_reconstruction_error(const KernelModel& model,
                                          const Eigen::Ref<const Vector>& x) {
  const KernelProjection p = kernel_projection(model, x);
  const double err = p.self_kernel - p.scores.squaredNorm();
  if (err >= 0.0) return err;
  const double scale = std::max(1.0, std::abs(p.self_kernel));
  if (err > -1e-8 * scale) return 0.0;
  throw ConsistencyError("kernel reconstruction error is negative (" + detail::format_number(err) +
                         ")");
}

}  // namespace gpca
