// gpca: fit models, run classification / reconstruction benchmarks and
// reproduce result tables from a JSON config.

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gpca/bench/config.hpp"
#include "gpca/bench/dataset.hpp"
#include "gpca/bench/experiment.hpp"
#include "gpca/bench/model_io.hpp"
#include "gpca/bench/table.hpp"

namespace {

using gpca::bench::ExperimentConfig;

struct ShapeOption {
  std::string text;

  void apply(ExperimentConfig& cfg) const {
    if (text.empty()) return;
    const auto x = text.find('x');
    if (x == std::string::npos) throw gpca::ConfigError("--shape expects HxW, got '" + text + "'");
    cfg.height = std::stoul(text.substr(0, x));
    cfg.width = std::stoul(text.substr(x + 1));
  }
};

void add_dataset_options(CLI::App* cmd, ExperimentConfig& cfg, ShapeOption& shape) {
  cmd->add_option("--format", cfg.format, "idx | csv-matrix | raw-u8")->capture_default_str();
  cmd->add_option("--shape", shape.text, "image shape HxW (raw-u8)");
  cmd->add_flag("!--unlabeled", cfg.labeled, "csv-matrix files carry no label column");
}

void add_method_options(CLI::App* cmd, ExperimentConfig& cfg) {
  cmd->add_option("--kernel", cfg.kernel, "none | linear | gaussian:<rho>")->capture_default_str();
  cmd->add_option("--components,-k", cfg.components, "principal vectors per model")
      ->capture_default_str();
  cmd->add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
  cmd->add_option("--tol", cfg.tol, "convergence tolerance")->capture_default_str();
  cmd->add_option("--max-iter", cfg.max_iter, "iteration cap")->capture_default_str();
  cmd->add_option("--mode", cfg.mode, "parallel | serial | auto (kernel solver)")
      ->capture_default_str();
  cmd->add_option("--threads", cfg.threads, "worker threads, 0 = all cores")->capture_default_str();
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    grid.push_back(gpca::detail::parse_positive(item, "rho"));
  }
  return grid;
}

void print_warnings(const nlohmann::json& metadata) {
  if (!metadata.contains("warnings")) return;
  for (const auto& w : metadata["warnings"]) std::cerr << "warning: " << w.get<std::string>() << '\n';
}

void finish(const gpca::bench::ResultTable& table, const std::string& out) {
  print_warnings(table.metadata);
  if (out.empty() || out == "-") {
    std::cout << gpca::bench::to_csv(table);
  } else {
    gpca::bench::emit_table(table, out);
    std::cerr << "wrote " << out << " and " << gpca::bench::sidecar_path(out) << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized PCA / kernel PCA solvers and benchmark harness"};
  app.require_subcommand(1);

  // fit
  ExperimentConfig fit_cfg;
  ShapeOption fit_shape;
  std::string fit_data, fit_labels, fit_objective = "lp:2", fit_out;
  auto* fit = app.add_subcommand("fit", "fit one model on a dataset and save it as JSON");
  fit->add_option("--data", fit_data, "dataset path")->required();
  fit->add_option("--labels", fit_labels, "IDX label file (ignored by the fit)");
  fit->add_option("--objective", fit_objective, "lp:<p> | crossover:<a> | zeta1 | zeta2 | gauss:<q>")
      ->capture_default_str();
  fit->add_option("--out", fit_out, "model path")->required();
  add_dataset_options(fit, fit_cfg, fit_shape);
  add_method_options(fit, fit_cfg);

  // classify
  ExperimentConfig cls_cfg;
  ShapeOption cls_shape;
  std::string cls_out;
  auto* cls = app.add_subcommand("classify", "minimum reconstruction error classification");
  cls->add_option("--train", cls_cfg.train, "training set")->required();
  cls->add_option("--test", cls_cfg.test, "test set")->required();
  cls->add_option("--train-labels", cls_cfg.train_labels, "IDX label file for --train");
  cls->add_option("--test-labels", cls_cfg.test_labels, "IDX label file for --test");
  cls->add_option("--objective", cls_cfg.objectives, "objective(s), repeatable")->capture_default_str();
  cls->add_option("--noise", cls_cfg.noise, "none | gauss:<sigma> | sp:<delta> | speckle:<eta>, repeatable")
      ->capture_default_str();
  cls->add_flag("--noise-test-only", cls_cfg.noise_test_only, "leave the training split clean");
  cls->add_flag("--error-rate", cls_cfg.error_rate, "report misclassification percent");
  cls->add_option("--train-limit", cls_cfg.train_limit, "use the first n training samples");
  cls->add_option("--test-limit", cls_cfg.test_limit, "use the first n test samples");
  cls->add_option("--out", cls_out, "CSV path ('-' for stdout)");
  add_dataset_options(cls, cls_cfg, cls_shape);
  add_method_options(cls, cls_cfg);

  // reconstruct
  ExperimentConfig rec_cfg;
  rec_cfg.task = "reconstruct";
  rec_cfg.labeled = false;
  ShapeOption rec_shape;
  std::string rec_out;
  auto* rec = app.add_subcommand("reconstruct", "reconstruction error with appended noise images");
  rec->add_option("--data", rec_cfg.data, "image set")->required();
  rec->add_option("--noise-images", rec_cfg.noise_images, "noise image count(s), repeatable")
      ->capture_default_str();
  rec->add_option("--objective", rec_cfg.objectives, "objective(s), repeatable")->capture_default_str();
  rec->add_option("--out", rec_out, "CSV path ('-' for stdout)");
  rec->add_flag("--labeled", rec_cfg.labeled, "csv-matrix rows start with a (ignored) label");
  rec->add_option("--format", rec_cfg.format, "idx | csv-matrix | raw-u8")->capture_default_str();
  rec->add_option("--shape", rec_shape.text, "image shape HxW (raw-u8)");
  add_method_options(rec, rec_cfg);

  // sweep-rho
  ExperimentConfig rho_cfg;
  ShapeOption rho_shape;
  std::string rho_grid, rho_out;
  auto* rho = app.add_subcommand("sweep-rho", "pick the Gaussian kernel width by L2-KPCA accuracy");
  rho->add_option("--train", rho_cfg.train, "training set")->required();
  rho->add_option("--test", rho_cfg.test, "validation set")->required();
  rho->add_option("--train-labels", rho_cfg.train_labels, "IDX label file for --train");
  rho->add_option("--test-labels", rho_cfg.test_labels, "IDX label file for --test");
  rho->add_option("--grid", rho_grid, "comma-separated rho values")->required();
  rho->add_option("--train-limit", rho_cfg.train_limit, "use the first n training samples");
  rho->add_option("--test-limit", rho_cfg.test_limit, "use the first n validation samples");
  rho->add_option("--out", rho_out, "CSV of rho,accuracy");
  add_dataset_options(rho, rho_cfg, rho_shape);
  add_method_options(rho, rho_cfg);

  // table
  std::string table_config, table_out;
  auto* table = app.add_subcommand("table", "run a JSON experiment config and write its table");
  table->add_option("--config", table_config, "experiment config (JSON)")->required();
  table->add_option("--out", table_out, "CSV path ('-' for stdout)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*fit) {
      fit_shape.apply(fit_cfg);
      fit_cfg.validate();
      const gpca::bench::Dataset ds = gpca::bench::load_split(fit_cfg, fit_data, fit_labels, 0);
      gpca::bench::MethodConfig method = fit_cfg.method(fit_objective);
      std::vector<std::string> warnings;
      const auto model = gpca::bench::SubspaceModel::fit(ds.samples, method, &warnings);
      for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
      if (model.is_kernel()) {
        gpca::bench::save_model(gpca::bench::model_to_json(model.kernel_model(), method.mode), fit_out);
      } else {
        gpca::bench::LinearModel lm{method.objective, model.mean(), model.basis()};
        gpca::bench::save_model(gpca::bench::model_to_json(lm), fit_out);
      }
      std::cerr << "fitted " << model.size() << " components on " << ds.size() << " samples; wrote "
                << fit_out << '\n';
    } else if (*cls) {
      cls_shape.apply(cls_cfg);
      cls_cfg.task = "classify";
      finish(gpca::bench::run_experiment(cls_cfg), cls_out);
    } else if (*rec) {
      rec_shape.apply(rec_cfg);
      finish(gpca::bench::run_experiment(rec_cfg), rec_out);
    } else if (*rho) {
      rho_shape.apply(rho_cfg);
      rho_cfg.validate();
      const auto train = gpca::bench::load_split(rho_cfg, rho_cfg.train, rho_cfg.train_labels, rho_cfg.train_limit);
      const auto test = gpca::bench::load_split(rho_cfg, rho_cfg.test, rho_cfg.test_labels, rho_cfg.test_limit);
      const auto result = gpca::bench::rho_sweep(train, test, parse_grid(rho_grid), rho_cfg.method("lp:2"));
      std::ostringstream csv;
      csv << "rho,accuracy\n";
      for (std::size_t i = 0; i < result.grid.size(); ++i) {
        csv << gpca::detail::format_number(result.grid[i]) << ','
            << gpca::bench::detail::format_cell(result.accuracies[i]) << '\n';
      }
      if (!rho_out.empty()) {
        std::ofstream out(rho_out, std::ios::binary);
        out << csv.str();
      } else {
        std::cerr << csv.str();
      }
      std::cout << gpca::detail::format_number(result.best_rho) << '\n';
    } else if (*table) {
      finish(gpca::bench::run_experiment(ExperimentConfig::load(table_config)), table_out);
    }
  } catch (const gpca::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
