#pragma once

// Per-component objective functions f and their derivatives f'.
//
// Every objective is even (f' is odd), so w and -w score identically.
// Objectives that are only known through f' (zeta1, zeta2, gauss) get the
// antiderivative with f(0) = 0; that value is only used to monitor progress.

#include <charconv>
#include <cmath>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>

#include <boost/math/special_functions/gamma.hpp>

#include "gpca/errors.hpp"

namespace gpca {

enum class ObjectiveKind { LpPower, Crossover, Zeta1, Zeta2, GaussianLike };

namespace detail {

inline double sign(double x) noexcept {
  return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
}

inline double parse_positive(std::string_view text, std::string_view what) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || text.empty()) {
    throw ConfigError("cannot parse " + std::string(what) + " from '" +
                      std::string(text) + "'");
  }
  return value;
}

inline std::string format_number(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace detail

/// A convex-ish per-component objective, immutable after construction.
class ObjectiveSpec {
 public:
  /// f(x) = |x|^p.
  static ObjectiveSpec lp(double p) { return ObjectiveSpec(ObjectiveKind::LpPower, p); }
  /// g_a: x^2 for |x| <= a, |x| beyond.
  static ObjectiveSpec crossover(double a) { return ObjectiveSpec(ObjectiveKind::Crossover, a); }
  /// f'(x) = (1 - sech|x|) sign(x).
  static ObjectiveSpec zeta1() { return ObjectiveSpec(ObjectiveKind::Zeta1, 0.0); }
  /// f'(x) = tanh^2|x| sign(x).
  static ObjectiveSpec zeta2() { return ObjectiveSpec(ObjectiveKind::Zeta2, 0.0); }
  /// h_q: f'(x) = exp(-|x|^q) sign(x).
  static ObjectiveSpec gaussian_like(double q) {
    return ObjectiveSpec(ObjectiveKind::GaussianLike, q);
  }

  /// Parses "lp:<p>", "crossover:<a>", "zeta1", "zeta2" or "gauss:<q>".
  static ObjectiveSpec parse(std::string_view text) {
    const auto colon = text.find(':');
    const std::string_view head = text.substr(0, colon);
    const std::string_view arg =
        colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
    const bool has_arg = colon != std::string_view::npos;
    if (head == "zeta1" && !has_arg) return zeta1();
    if (head == "zeta2" && !has_arg) return zeta2();
    if (has_arg) {
      if (head == "lp") return lp(detail::parse_positive(arg, "p"));
      if (head == "crossover") return crossover(detail::parse_positive(arg, "a"));
      if (head == "gauss") return gaussian_like(detail::parse_positive(arg, "q"));
    }
    throw ConfigError("unknown objective '" + std::string(text) +
                      "' (expected lp:<p>, crossover:<a>, zeta1, zeta2, gauss:<q>)");
  }

  ObjectiveKind kind() const noexcept { return kind_; }
  /// p, a or q depending on the kind; 0 for zeta1/zeta2.
  double param() const noexcept { return param_; }

  double f(double x) const {
    const double ax = std::abs(x);
    switch (kind_) {
      case ObjectiveKind::LpPower:
        return param_ == 2.0 ? x * x : std::pow(ax, param_);
      case ObjectiveKind::Crossover:
        return ax <= param_ ? x * x : ax;
      case ObjectiveKind::Zeta1:
        // |x| - gd(|x|), gd(t) = 2 atan(tanh(t/2))
        return ax - 2.0 * std::atan(std::tanh(0.5 * ax));
      case ObjectiveKind::Zeta2:
        return ax - std::tanh(ax);
      case ObjectiveKind::GaussianLike:
        if (ax == 0.0) return 0.0;
        // int_0^|x| exp(-t^q) dt = gamma_lower(1/q, |x|^q) / q
        return boost::math::tgamma_lower(1.0 / param_, std::pow(ax, param_)) / param_;
    }
    return 0.0;
  }

  double fprime(double x) const {
    const double s = detail::sign(x);
    if (s == 0.0) return 0.0;
    const double ax = std::abs(x);
    switch (kind_) {
      case ObjectiveKind::LpPower:
        if (param_ == 2.0) return 2.0 * x;
        if (param_ == 1.0) return s;
        return param_ * std::pow(ax, param_ - 1.0) * s;
      case ObjectiveKind::Crossover:
        return ax <= param_ ? 2.0 * x : s;
      case ObjectiveKind::Zeta1:
        return (1.0 - 1.0 / std::cosh(ax)) * s;
      case ObjectiveKind::Zeta2: {
        const double t = std::tanh(ax);
        return t * t * s;
      }
      case ObjectiveKind::GaussianLike:
        return std::exp(-std::pow(ax, param_)) * s;
    }
    return 0.0;
  }

  /// True when f' takes only the values {-1, 0, 1} (the L1 / Hopfield case).
  bool is_sign() const noexcept { return kind_ == ObjectiveKind::LpPower && param_ == 1.0; }

  /// Convex on the real line. g_a never is: it either jumps (a != 1) or its
  /// slope drops from 2a to 1 at |x| = a. h_q has decreasing f' for x > 0.
  bool is_convex() const noexcept {
    switch (kind_) {
      case ObjectiveKind::LpPower: return param_ >= 1.0;
      case ObjectiveKind::Zeta1:
      case ObjectiveKind::Zeta2: return true;
      case ObjectiveKind::Crossover:
      case ObjectiveKind::GaussianLike: return false;
    }
    return false;
  }

  /// f(-x) == f(x). Holds for the whole menu.
  bool is_even() const noexcept { return true; }

  /// Canonical grammar string, e.g. "lp:1.5".
  std::string to_string() const {
    switch (kind_) {
      case ObjectiveKind::LpPower: return "lp:" + detail::format_number(param_);
      case ObjectiveKind::Crossover: return "crossover:" + detail::format_number(param_);
      case ObjectiveKind::Zeta1: return "zeta1";
      case ObjectiveKind::Zeta2: return "zeta2";
      case ObjectiveKind::GaussianLike: return "gauss:" + detail::format_number(param_);
    }
    return {};
  }

  friend bool operator==(const ObjectiveSpec&, const ObjectiveSpec&) = default;

 private:
  ObjectiveSpec(ObjectiveKind kind, double param) : kind_(kind), param_(param) {
    const bool needs_param = kind == ObjectiveKind::LpPower ||
                             kind == ObjectiveKind::Crossover ||
                             kind == ObjectiveKind::GaussianLike;
    if (needs_param && !(param > 0.0 && std::isfinite(param))) {
      throw ConfigError("objective parameter must be a positive finite number, got " +
                        detail::format_number(param));
    }
  }

  ObjectiveKind kind_;
  double param_;
};

inline double eval_f(const ObjectiveSpec& spec, double x) { return spec.f(x); }
inline double eval_fprime(const ObjectiveSpec& spec, double x) { return spec.fprime(x); }

}  // namespace gpca
