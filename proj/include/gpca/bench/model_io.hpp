#pragma once

// JSON model container, tagged {"format": "gpca-model", "version": 1}.
//
//   kind "linear": objective, mean, basis (k rows of d), diagnostics
//   kind "kernel": objective, kernel, mode, training samples, raw Gram row
//                  means and grand mean, components (c, normalizer, flags)
//                  and the deflation history (c, Kc, c^T K c)
//
// The centered/deflated Gram matrix itself is not stored; everything needed
// for scoring new points is.

#include <fstream>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "gpca/bench/experiment.hpp"
#include "gpca/errors.hpp"
#include "gpca/gkpca.hpp"
#include "gpca/pca.hpp"

namespace gpca::bench {

inline constexpr const char* kModelFormat = "gpca-model";
inline constexpr int kModelVersion = 1;

struct LinearModel {
  ObjectiveSpec objective = ObjectiveSpec::lp(2.0);
  Vector mean;
  PrincipalBasis basis;
};

using SavedModel = std::variant<LinearModel, KernelModel>;

namespace detail {

inline nlohmann::json to_json(const Vector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

inline Vector vector_from_json(const nlohmann::json& j) {
  const auto values = j.get<std::vector<double>>();
  Vector v(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) v[static_cast<Eigen::Index>(i)] = values[i];
  return v;
}

inline nlohmann::json rows_to_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(to_json(m.row(i).transpose()));
  return rows;
}

inline Matrix rows_from_json(const nlohmann::json& j, Eigen::Index cols) {
  Matrix m(static_cast<Eigen::Index>(j.size()), cols);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const Vector row = vector_from_json(j[i]);
    if (row.size() != cols) throw LoadError("model: ragged matrix row " + std::to_string(i));
    m.row(static_cast<Eigen::Index>(i)) = row.transpose();
  }
  return m;
}

}  // namespace detail

inline nlohmann::json model_to_json(const LinearModel& model) {
  nlohmann::json j;
  j["format"] = kModelFormat;
  j["version"] = kModelVersion;
  j["kind"] = "linear";
  j["objective"] = model.objective.to_string();
  j["dim"] = model.mean.size();
  j["mean"] = detail::to_json(model.mean);
  j["basis"] = detail::rows_to_json(model.basis.vectors.transpose());
  nlohmann::json diags = nlohmann::json::array();
  for (const auto& d : model.basis.diagnostics) {
    diags.push_back({{"iterations", d.iterations}, {"objective", d.objective},
                     {"converged", d.converged}, {"monotone", d.monotone}});
  }
  j["diagnostics"] = diags;
  return j;
}

inline nlohmann::json model_to_json(const KernelModel& model, SolveMode mode = SolveMode::Auto) {
  nlohmann::json j;
  j["format"] = kModelFormat;
  j["version"] = kModelVersion;
  j["kind"] = "kernel";
  j["objective"] = model.objective.to_string();
  j["kernel"] = model.kernel.to_string();
  j["mode"] = to_string(mode);
  j["dim"] = model.training.cols();
  j["training"] = detail::rows_to_json(model.training);
  j["centered"] = model.gram.centered;
  j["raw_row_means"] = detail::to_json(model.gram.raw_row_means);
  j["raw_grand_mean"] = model.gram.raw_grand_mean;
  nlohmann::json comps = nlohmann::json::array();
  for (std::size_t m = 0; m < model.components.size(); ++m) {
    const DualComponent& c = model.components[m];
    const DeflationStep& step = model.gram.history.at(m);
    comps.push_back({{"c", detail::to_json(c.c)},
                     {"normalizer", c.normalizer},
                     {"converged", c.converged},
                     {"iterations", c.iterations},
                     {"cycle_detected", c.cycle_detected},
                     {"mode_used", to_string(c.mode_used)},
                     {"kc", detail::to_json(step.kc)},
                     {"energy", step.energy}});
  }
  j["components"] = comps;
  return j;
}

inline SavedModel model_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format") != kModelFormat) throw LoadError("model: unknown format tag");
    if (j.at("version") != kModelVersion) throw LoadError("model: unsupported version");
    const auto dim = j.at("dim").get<Eigen::Index>();
    const ObjectiveSpec objective = ObjectiveSpec::parse(j.at("objective").get<std::string>());
    if (j.at("kind") == "linear") {
      LinearModel model;
      model.objective = objective;
      model.mean = detail::vector_from_json(j.at("mean"));
      model.basis.vectors = detail::rows_from_json(j.at("basis"), dim).transpose();
      for (const auto& d : j.at("diagnostics")) {
        AscentDiagnostics diag;
        diag.iterations = d.at("iterations").get<int>();
        diag.objective = d.at("objective").get<double>();
        diag.converged = d.at("converged").get<bool>();
        diag.monotone = d.at("monotone").get<bool>();
        model.basis.diagnostics.push_back(diag);
      }
      return model;
    }
    if (j.at("kind") == "kernel") {
      KernelModel model;
      model.objective = objective;
      model.kernel = KernelSpec::parse(j.at("kernel").get<std::string>());
      model.training = detail::rows_from_json(j.at("training"), dim);
      model.gram.centered = j.at("centered").get<bool>();
      model.gram.raw_row_means = detail::vector_from_json(j.at("raw_row_means"));
      model.gram.raw_grand_mean = j.at("raw_grand_mean").get<double>();
      for (const auto& c : j.at("components")) {
        DualComponent comp;
        comp.c = detail::vector_from_json(c.at("c"));
        comp.normalizer = c.at("normalizer").get<double>();
        comp.converged = c.at("converged").get<bool>();
        comp.iterations = c.at("iterations").get<int>();
        comp.cycle_detected = c.at("cycle_detected").get<bool>();
        comp.mode_used = parse_mode(c.at("mode_used").get<std::string>());
        DeflationStep step;
        step.c = comp.c;
        step.kc = detail::vector_from_json(c.at("kc"));
        step.energy = c.at("energy").get<double>();
        model.gram.history.push_back(std::move(step));
        model.components.push_back(std::move(comp));
      }
      return model;
    }
    throw LoadError("model: unknown kind");
  } catch (const nlohmann::json::exception& e) {
    throw LoadError(std::string("model: ") + e.what());
  }
}

inline void save_model(const nlohmann::json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << j.dump() << '\n';
}

inline SavedModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw LoadError(path + ": " + e.what());
  }
  return model_from_json(j);
}

}  // namespace gpca::bench
