#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>

#include "gpca/bench/dataset.hpp"
#include "gpca/errors.hpp"
#include "gpca/objective.hpp"

namespace gpca::bench {

enum class NoiseKind { None, Gaussian, SaltPepper, Speckle, NoiseImages };

struct NoiseSpec {
  NoiseKind kind = NoiseKind::None;
  /// sigma (std. dev., intensity units), delta (probability) or eta (variance).
  double level = 0.0;
  /// Number of appended images for NoiseImages.
  std::size_t count = 0;
  std::uint64_t seed = 0;

  void validate() const {
    switch (kind) {
      case NoiseKind::SaltPepper:
        if (!(level >= 0.0 && level <= 1.0)) throw ConfigError("salt-and-pepper delta must be in [0, 1]");
        break;
      case NoiseKind::Gaussian:
      case NoiseKind::Speckle:
        if (!(level >= 0.0)) throw ConfigError("noise level must be non-negative");
        break;
      default: break;
    }
  }

  /// Parses "none", "gauss:<sigma>", "sp:<delta>", "speckle:<eta>" or "images:<count>".
  static NoiseSpec parse(std::string_view text, std::uint64_t seed = 0) {
    NoiseSpec spec;
    spec.seed = seed;
    if (text == "none") return spec;
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) throw ConfigError("unknown noise '" + std::string(text) + "'");
    const std::string_view head = text.substr(0, colon);
    const std::string_view arg = text.substr(colon + 1);
    const double value = gpca::detail::parse_positive(arg, "noise level");
    if (head == "gauss") spec.kind = NoiseKind::Gaussian;
    else if (head == "sp") spec.kind = NoiseKind::SaltPepper;
    else if (head == "speckle") spec.kind = NoiseKind::Speckle;
    else if (head == "images") {
      spec.kind = NoiseKind::NoiseImages;
      if (value != static_cast<double>(static_cast<std::size_t>(value))) {
        throw ConfigError("noise image count must be an integer");
      }
      spec.count = static_cast<std::size_t>(value);
      return spec;
    } else {
      throw ConfigError("unknown noise '" + std::string(text) + "'");
    }
    spec.level = value;
    spec.validate();
    return spec;
  }

  std::string to_string() const {
    switch (kind) {
      case NoiseKind::None: return "none";
      case NoiseKind::Gaussian: return "gauss:" + gpca::detail::format_number(level);
      case NoiseKind::SaltPepper: return "sp:" + gpca::detail::format_number(level);
      case NoiseKind::Speckle: return "speckle:" + gpca::detail::format_number(level);
      case NoiseKind::NoiseImages: return "images:" + std::to_string(count);
    }
    return {};
  }

  /// Row label used in result tables (the bare level).
  std::string level_label() const {
    switch (kind) {
      case NoiseKind::None: return "0";
      case NoiseKind::NoiseImages: return std::to_string(count);
      default: return gpca::detail::format_number(level);
    }
  }
};

/// Applies `noise` drawing from `rng`, so several datasets can share one stream.
/// NoiseImages appends unlabeled rows and leaves `labels` as it was.
inline Dataset add_noise(Dataset data, const NoiseSpec& noise, std::mt19937_64& rng) {
  noise.validate();
  Matrix& x = data.samples;
  switch (noise.kind) {
    case NoiseKind::None: break;
    case NoiseKind::Gaussian: {
      if (noise.level == 0.0) break;
      std::normal_distribution<double> normal(0.0, noise.level);
      for (Eigen::Index i = 0; i < x.rows(); ++i)
        for (Eigen::Index j = 0; j < x.cols(); ++j)
          x(i, j) = std::clamp(x(i, j) + normal(rng), 0.0, 255.0);
      break;
    }
    case NoiseKind::SaltPepper: {
      if (noise.level == 0.0) break;
      std::uniform_real_distribution<double> uniform(0.0, 1.0);
      const double half = 0.5 * noise.level;
      for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
          const double u = uniform(rng);
          if (u < half) x(i, j) = 0.0;
          else if (u < noise.level) x(i, j) = 255.0;
        }
      }
      break;
    }
    case NoiseKind::Speckle: {
      if (noise.level == 0.0) break;
      std::normal_distribution<double> normal(0.0, std::sqrt(noise.level));
      for (Eigen::Index i = 0; i < x.rows(); ++i)
        for (Eigen::Index j = 0; j < x.cols(); ++j)
          x(i, j) = std::clamp(x(i, j) * (1.0 + normal(rng)), 0.0, 255.0);
      break;
    }
    case NoiseKind::NoiseImages: {
      if (noise.count == 0) break;
      std::bernoulli_distribution coin(0.5);
      const Eigen::Index n = x.rows();
      x.conservativeResize(n + static_cast<Eigen::Index>(noise.count), Eigen::NoChange);
      for (Eigen::Index i = n; i < x.rows(); ++i)
        for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = coin(rng) ? 255.0 : 0.0;
      break;
    }
  }
  return data;
}

/// Applies `noise` with a generator seeded from noise.seed.
inline Dataset add_noise(Dataset data, const NoiseSpec& noise) {
  std::mt19937_64 rng(noise.seed);
  return add_noise(std::move(data), noise, rng);
}

}  // namespace gpca::bench
