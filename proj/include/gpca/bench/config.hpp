#pragma once

// Declarative experiment runs, shared by the CLI subcommands and the
// `table` batch mode. A config is a JSON object such as
//
//   {"task": "classify", "train": "train.csv", "test": "test.csv",
//    "format": "csv-matrix", "noise": ["none", "gauss:10"],
//    "objectives": ["lp:1", "lp:2", "crossover:1"], "components": 30,
//    "seed": 7}
//
// Unknown keys are rejected so typos do not silently fall back to defaults.

#include <chrono>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gpca/bench/dataset.hpp"
#include "gpca/bench/experiment.hpp"
#include "gpca/bench/noise.hpp"
#include "gpca/bench/table.hpp"
#include "gpca/errors.hpp"

namespace gpca::bench {

struct ExperimentConfig {
  /// "classify" or "reconstruct".
  std::string task = "classify";
  std::string name;
  std::string train;
  std::string test;
  std::string data;
  std::string train_labels;
  std::string test_labels;
  std::string labels;
  std::string format = "idx";
  bool labeled = true;
  std::size_t height = 0;
  std::size_t width = 0;
  /// Keep only the first n samples (0 = all).
  std::size_t train_limit = 0;
  std::size_t test_limit = 0;

  std::vector<std::string> noise{"none"};
  std::vector<std::size_t> noise_images{0};
  std::vector<std::string> objectives{"lp:2"};
  std::string kernel = "none";
  Eigen::Index components = 30;
  double tol = 1e-8;
  int max_iter = 1000;
  std::string mode = "auto";
  std::uint64_t seed = 0;
  /// Noise only the test split (default: both splits, one generator stream).
  bool noise_test_only = false;
  /// Report 100 - accuracy instead of accuracy.
  bool error_rate = false;
  unsigned threads = 0;

  MethodConfig method(const std::string& objective) const {
    MethodConfig m;
    m.objective = ObjectiveSpec::parse(objective);
    if (kernel != "none") m.kernel = KernelSpec::parse(kernel);
    m.components = components;
    m.settings.tol = tol;
    m.settings.max_iter = max_iter;
    m.settings.monitor_objective = false;
    m.settings.seed = seed;
    m.mode = parse_mode(mode);
    m.threads = threads;
    return m;
  }

  void validate() const {
    if (task != "classify" && task != "reconstruct") throw ConfigError("task must be classify or reconstruct");
    if (components < 1) throw ConfigError("components must be at least 1");
    if (objectives.empty()) throw ConfigError("at least one objective is required");
    for (const auto& o : objectives) (void)ObjectiveSpec::parse(o);
    if (kernel != "none") (void)KernelSpec::parse(kernel);
    (void)parse_mode(mode);
    (void)parse_format(format);
    for (const auto& n : noise) (void)NoiseSpec::parse(n);
    AscentSettings s;
    s.tol = tol;
    s.max_iter = max_iter;
    s.validate();
  }

  nlohmann::json to_json() const {
    return {{"task", task},         {"name", name},
            {"train", train},       {"test", test},
            {"data", data},         {"train_labels", train_labels},
            {"test_labels", test_labels}, {"labels", labels},
            {"format", format},     {"labeled", labeled},
            {"height", height},     {"width", width},
            {"train_limit", train_limit}, {"test_limit", test_limit},
            {"noise", noise},       {"noise_images", noise_images},
            {"objectives", objectives}, {"kernel", kernel},
            {"components", components}, {"tol", tol},
            {"max_iter", max_iter}, {"mode", mode},
            {"seed", seed},         {"noise_test_only", noise_test_only},
            {"error_rate", error_rate}, {"threads", threads}};
  }

  static ExperimentConfig from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    const nlohmann::json defaults = c.to_json();
    try {
      for (const auto& [key, value] : j.items()) {
        if (!defaults.contains(key)) throw ConfigError("unknown config key '" + key + "'");
      }
      auto take = [&](const char* key, auto& field) {
        if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
      };
      take("task", c.task);
      take("name", c.name);
      take("train", c.train);
      take("test", c.test);
      take("data", c.data);
      take("train_labels", c.train_labels);
      take("test_labels", c.test_labels);
      take("labels", c.labels);
      take("format", c.format);
      take("labeled", c.labeled);
      take("height", c.height);
      take("width", c.width);
      take("train_limit", c.train_limit);
      take("test_limit", c.test_limit);
      take("noise", c.noise);
      take("noise_images", c.noise_images);
      take("objectives", c.objectives);
      take("kernel", c.kernel);
      take("components", c.components);
      take("tol", c.tol);
      take("max_iter", c.max_iter);
      take("mode", c.mode);
      take("seed", c.seed);
      take("noise_test_only", c.noise_test_only);
      take("error_rate", c.error_rate);
      take("threads", c.threads);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
    c.validate();
    return c;
  }

  static ExperimentConfig load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(path + ": " + e.what());
    }
    return from_json(j);
  }
};

namespace detail {

inline std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline Dataset truncate(Dataset ds, std::size_t limit) {
  if (limit == 0 || limit >= static_cast<std::size_t>(ds.size())) return ds;
  ds.samples.conservativeResize(static_cast<Eigen::Index>(limit), Eigen::NoChange);
  if (ds.labeled()) ds.labels.resize(limit);
  return ds;
}

inline nlohmann::json base_metadata(const ExperimentConfig& cfg) {
  const nlohmann::json cj = cfg.to_json();
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(fnv1a(cj.dump())));
  return {{"config", cj}, {"seed", cfg.seed}, {"config_hash", hash},
          {"generated_at", utc_timestamp()}};
}

}  // namespace detail

inline Dataset load_split(const ExperimentConfig& cfg, const std::string& path,
                          const std::string& labels_path, std::size_t limit) {
  LoadOptions opt;
  opt.labeled = cfg.labeled;
  opt.labels_path = labels_path;
  opt.height = cfg.height;
  opt.width = cfg.width;
  return detail::truncate(load_dataset(path, parse_format(cfg.format), opt), limit);
}

/// Accuracy (or error rate) for every noise level x objective.
inline ResultTable run_classification(const Dataset& train, const Dataset& test,
                                      const ExperimentConfig& cfg) {
  cfg.validate();
  ResultTable table;
  table.row_header = "noise";
  table.columns = cfg.objectives;
  table.metadata = detail::base_metadata(cfg);
  table.metadata["train_count"] = train.size();
  table.metadata["test_count"] = test.size();
  nlohmann::json warnings = nlohmann::json::array();

  for (const auto& noise_text : cfg.noise) {
    const NoiseSpec noise = NoiseSpec::parse(noise_text, cfg.seed);
    std::mt19937_64 rng(cfg.seed);
    const Dataset noisy_train = cfg.noise_test_only ? train : add_noise(train, noise, rng);
    const Dataset noisy_test = add_noise(test, noise, rng);
    std::vector<double> row;
    for (const auto& objective : cfg.objectives) {
      const ClassificationResult r = classify(noisy_train, noisy_test, cfg.method(objective));
      row.push_back(cfg.error_rate ? 100.0 - r.accuracy : r.accuracy);
      for (const auto& w : r.warnings) warnings.push_back(noise_text + " " + objective + ": " + w);
    }
    table.add_row(noise.level_label(), std::move(row));
  }
  table.metadata["warnings"] = warnings;
  table.metadata["metric"] = cfg.error_rate ? "error_rate_percent" : "accuracy_percent";
  return table;
}

/// Mean reconstruction error / 1000 over the original images, for every
/// noise-image count x objective.
inline ResultTable run_reconstruction(const Dataset& data, const ExperimentConfig& cfg) {
  cfg.validate();
  ResultTable table;
  table.row_header = "noise_images";
  table.columns = cfg.objectives;
  table.metadata = detail::base_metadata(cfg);
  table.metadata["image_count"] = data.size();
  nlohmann::json warnings = nlohmann::json::array();
  for (std::size_t count : cfg.noise_images) {
    std::vector<double> row;
    for (const auto& objective : cfg.objectives) {
      const ReconstructionResult r = reconstruction_report(data, cfg.method(objective), count, cfg.seed);
      row.push_back(r.scaled_error);
      for (const auto& w : r.warnings) warnings.push_back(std::to_string(count) + " " + objective + ": " + w);
    }
    table.add_row(std::to_string(count), std::move(row));
  }
  table.metadata["warnings"] = warnings;
  table.metadata["metric"] = "mean_squared_reconstruction_error_div_1000";
  return table;
}

inline ResultTable run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.task == "classify") {
    const Dataset train = load_split(cfg, cfg.train, cfg.train_labels, cfg.train_limit);
    const Dataset test = load_split(cfg, cfg.test, cfg.test_labels, cfg.test_limit);
    return run_classification(train, test, cfg);
  }
  Dataset data = load_split(cfg, cfg.data, cfg.labels, cfg.train_limit);
  data.labels.clear();
  return run_reconstruction(data, cfg);
}

}  // namespace gpca::bench
