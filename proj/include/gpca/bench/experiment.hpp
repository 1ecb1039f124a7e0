#pragma once

// Per-class subspace models, minimum-reconstruction-error classification,
// the noise-image reconstruction protocol and the Gaussian bandwidth sweep.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "gpca/bench/dataset.hpp"
#include "gpca/bench/noise.hpp"
#include "gpca/errors.hpp"
#include "gpca/gkpca.hpp"
#include "gpca/kernel.hpp"
#include "gpca/objective.hpp"
#include "gpca/pca.hpp"

namespace gpca::bench {

/// What to fit per class (or per dataset).
struct MethodConfig {
  ObjectiveSpec objective = ObjectiveSpec::lp(2.0);
  /// Empty for the non-kernel method.
  std::optional<KernelSpec> kernel;
  Eigen::Index components = 30;
  AscentSettings settings;
  SolveMode mode = SolveMode::Auto;
  /// Worker threads for independent fits and predictions; 0 = hardware concurrency.
  unsigned threads = 0;
};

namespace detail {

inline unsigned worker_count(unsigned requested, std::size_t jobs) {
  unsigned n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

// Runs body(i) for i in [0, count) on a small pool; the first exception wins.
template <typename Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
  const unsigned workers = worker_count(threads, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace detail

/// One fitted subspace: mean + basis (non-kernel) or a kernel model.
class SubspaceModel {
 public:
  struct Residual {
    double error = 0.0;
    /// ||x - mean||^2 or the centered self-kernel; scale for tie detection.
    double energy = 0.0;
  };

  /// Fits with at most `cfg.components` vectors, reducing k (with a warning)
  /// when the samples cannot support that many.
  static SubspaceModel fit(const Matrix& samples, const MethodConfig& cfg,
                           std::vector<std::string>* warnings = nullptr,
                           const std::string& tag = {}) {
    if (samples.rows() < 1) throw DataError("cannot fit a subspace to zero samples");
    SubspaceModel model;
    const Eigen::Index n = samples.rows();
    const Eigen::Index rank_cap = n - 1;
    Eigen::Index k = cfg.components;
    auto warn = [&](const std::string& msg) {
      if (warnings) warnings->push_back(tag.empty() ? msg : tag + ": " + msg);
    };

    if (cfg.kernel) {
      k = std::min(k, rank_cap);
      if (k < cfg.components) warn("only " + std::to_string(n) + " samples; using k=" + std::to_string(k));
      if (k >= 1) {
        model.kernel_ = gpca::detail::fit_kernel_greedy(samples, *cfg.kernel, cfg.objective, k,
                                                        cfg.settings, cfg.mode, true);
      } else {
        KernelModel empty;
        empty.objective = cfg.objective;
        empty.kernel = *cfg.kernel;
        empty.training = samples;
        empty.gram = center_gram(gram(samples, *cfg.kernel));
        model.kernel_ = std::move(empty);
      }
      if (model.kernel_->size() < k) {
        warn("rank exhausted after " + std::to_string(model.kernel_->size()) + " components");
      }
      return model;
    }

    DataMatrix data = center(samples);
    model.mean_ = data.mean;
    k = std::min({k, rank_cap, data.dim()});
    if (k < cfg.components) warn("rank limited; using k=" + std::to_string(k));
    if (k >= 1) {
      model.basis_ = gpca::detail::fit_greedy(data.samples, cfg.objective, k, cfg.settings, true);
    } else {
      model.basis_ = PrincipalBasis::empty(data.dim());
    }
    if (model.basis_.size() < k) {
      warn("rank exhausted after " + std::to_string(model.basis_.size()) + " vectors");
    }
    return model;
  }

  Residual residual(const Eigen::Ref<const Vector>& x) const {
    if (kernel_) {
      const KernelProjection p = kernel_projection(*kernel_, x);
      double err = p.self_kernel - p.scores.squaredNorm();
      if (err < 0.0) err = 0.0;
      return {err, std::max(0.0, p.self_kernel)};
    }
    const Vector centered = x - mean_;
    return {reconstruction_error(basis_, centered), centered.squaredNorm()};
  }

  bool is_kernel() const noexcept { return kernel_.has_value(); }
  Eigen::Index size() const noexcept { return kernel_ ? kernel_->size() : basis_.size(); }
  const Vector& mean() const noexcept { return mean_; }
  const PrincipalBasis& basis() const noexcept { return basis_; }
  const KernelModel& kernel_model() const { return *kernel_; }

  static SubspaceModel from_linear(Vector mean, PrincipalBasis basis) {
    SubspaceModel m;
    m.mean_ = std::move(mean);
    m.basis_ = std::move(basis);
    return m;
  }
  static SubspaceModel from_kernel(KernelModel km) {
    SubspaceModel m;
    m.kernel_ = std::move(km);
    return m;
  }

 private:
  Vector mean_;
  PrincipalBasis basis_;
  std::optional<KernelModel> kernel_;
};

/// Index of the smallest residual. Residuals within 1e-10 * max(1, largest
/// energy) of the minimum count as ties and resolve to the smallest index.
inline int argmin_residual(const std::vector<SubspaceModel::Residual>& residuals) {
  double best = std::numeric_limits<double>::infinity();
  double scale = 1.0;
  for (const auto& r : residuals) {
    best = std::min(best, r.error);
    scale = std::max(scale, r.energy);
  }
  const double tie = 1e-10 * scale;
  for (std::size_t c = 0; c < residuals.size(); ++c)
    if (residuals[c].error <= best + tie) return static_cast<int>(c);
  return -1;
}

/// One subspace per class; predicts the class with the lowest reconstruction error.
class SubspaceClassifier {
 public:
  static SubspaceClassifier train(const Dataset& train, const MethodConfig& cfg) {
    if (!train.labeled()) throw DataError("classifier training data must be labeled");
    SubspaceClassifier clf;
    const int classes = train.num_classes();
    clf.models_.resize(static_cast<std::size_t>(classes));
    std::vector<std::vector<std::string>> warnings(static_cast<std::size_t>(classes));
    gpca::bench::detail::parallel_for(static_cast<std::size_t>(classes), cfg.threads, [&](std::size_t c) {
      const Matrix samples = train.class_samples(static_cast<int>(c));
      if (samples.rows() == 0) {
        throw DataError("class " + std::to_string(c) + " has no training samples");
      }
      MethodConfig local = cfg;
      local.settings.seed = cfg.settings.seed + c;
      clf.models_[c] = SubspaceModel::fit(samples, local, &warnings[c], "class " + std::to_string(c));
    });
    for (auto& w : warnings) clf.warnings_.insert(clf.warnings_.end(), w.begin(), w.end());
    return clf;
  }

  std::vector<SubspaceModel::Residual> residuals(const Eigen::Ref<const Vector>& x) const {
    std::vector<SubspaceModel::Residual> out;
    out.reserve(models_.size());
    for (const auto& m : models_) out.push_back(m.residual(x));
    return out;
  }

  int predict(const Eigen::Ref<const Vector>& x) const { return argmin_residual(residuals(x)); }

  const std::vector<SubspaceModel>& models() const noexcept { return models_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

 private:
  std::vector<SubspaceModel> models_;
  std::vector<std::string> warnings_;
};

struct ClassificationResult {
  /// 100 * correct / total.
  double accuracy = 0.0;
  std::size_t correct = 0;
  std::size_t total = 0;
  std::vector<int> predictions;
  std::vector<std::string> warnings;
};

inline ClassificationResult classify(const Dataset& train, const Dataset& test,
                                     const MethodConfig& cfg) {
  if (!test.labeled()) throw DataError("classifier test data must be labeled");
  if (train.dim() != test.dim()) throw DimensionError("train/test dimension mismatch");
  const SubspaceClassifier clf = SubspaceClassifier::train(train, cfg);
  ClassificationResult out;
  out.total = static_cast<std::size_t>(test.size());
  out.predictions.assign(out.total, -1);
  gpca::bench::detail::parallel_for(out.total, cfg.threads, [&](std::size_t i) {
    out.predictions[i] = clf.predict(test.samples.row(static_cast<Eigen::Index>(i)).transpose());
  });
  for (std::size_t i = 0; i < out.total; ++i)
    if (out.predictions[i] == test.labels[i]) ++out.correct;
  out.accuracy = out.total ? 100.0 * static_cast<double>(out.correct) / static_cast<double>(out.total) : 0.0;
  out.warnings = clf.warnings();
  return out;
}

struct ReconstructionResult {
  /// Mean squared reconstruction error over the original images.
  double mean_error = 0.0;
  /// mean_error / 1000, the reporting scale.
  double scaled_error = 0.0;
  Eigen::Index components = 0;
  std::vector<std::string> warnings;
};

/// Fits one subspace on `data` plus `noise_images` random black/white images
/// and reports the reconstruction error of the original images only.
inline ReconstructionResult reconstruction_report(const Dataset& data, const MethodConfig& cfg,
                                                  std::size_t noise_images, std::uint64_t seed) {
  NoiseSpec noise;
  noise.kind = NoiseKind::NoiseImages;
  noise.count = noise_images;
  noise.seed = seed;
  const Dataset extended = add_noise(data, noise);
  ReconstructionResult out;
  const SubspaceModel model = SubspaceModel::fit(extended.samples, cfg, &out.warnings);
  out.components = model.size();
  std::vector<double> errors(static_cast<std::size_t>(data.size()));
  gpca::bench::detail::parallel_for(errors.size(), cfg.threads, [&](std::size_t i) {
    errors[i] = model.residual(data.samples.row(static_cast<Eigen::Index>(i)).transpose()).error;
  });
  double total = 0.0;
  for (double e : errors) total += e;
  out.mean_error = errors.empty() ? 0.0 : total / static_cast<double>(errors.size());
  out.scaled_error = out.mean_error / 1000.0;
  return out;
}

struct RhoSweepResult {
  double best_rho = 0.0;
  std::vector<double> grid;
  std::vector<double> accuracies;
};

/// Runs L2 kernel classification for every rho and keeps the most accurate
/// (smallest rho on ties). The objective in `cfg` is ignored.
inline RhoSweepResult rho_sweep(const Dataset& train, const Dataset& validation,
                                const std::vector<double>& grid, MethodConfig cfg) {
  if (grid.empty()) throw ConfigError("rho_sweep: empty grid");
  cfg.objective = ObjectiveSpec::lp(2.0);
  RhoSweepResult out;
  out.grid = grid;
  double best_acc = -1.0;
  for (double rho : grid) {
    cfg.kernel = KernelSpec::gaussian(rho);
    const double acc = classify(train, validation, cfg).accuracy;
    out.accuracies.push_back(acc);
    if (acc > best_acc || (acc == best_acc && rho < out.best_rho)) {
      best_acc = acc;
      out.best_rho = rho;
    }
  }
  return out;
}

}  // namespace gpca::bench
