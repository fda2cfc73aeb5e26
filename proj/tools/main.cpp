// Command line driver: data generation, fitting, tuning, prediction,
// gradients, and accuracy reports, each with a reproducibility manifest.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.

#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "manifest.hpp"
#include "pureg/csv.hpp"
#include "pureg/datagen.hpp"
#include "pureg/errors.hpp"
#include "pureg/fs_util.hpp"
#include "pureg/metrics.hpp"
#include "pureg/model_io.hpp"
#include "pureg/stitched_model.hpp"
#include "pureg/tuning.hpp"

namespace {

namespace fs = std::filesystem;
using pureg::cli::Manifest;

struct FitFlags {
  int h = 100;
  std::string model = "pu-krr-poly";
  int degree = 2;
  double eta = 0.0;
  CLI::Option* eta_opt = nullptr;  // set iff the user passed --eta
  double sigma_mult = 1.0;
  double w0 = 1e-5;
  std::uint64_t seed = 0;
  double validation_fraction = 0.2;
  std::vector<double> eta_grid;
  std::vector<double> sigma_mult_grid;
  bool grid_default = false;
};

// --h is a real option here, so help lives on --help alone.
CLI::App* add_cmd(CLI::App* parent, const std::string& name, const std::string& desc) {
  CLI::App* cmd = parent->add_subcommand(name, desc);
  cmd->set_help_flag("--help", "Print help and exit");
  return cmd;
}

void add_fit_flags(CLI::App* cmd, FitFlags& f, bool tuning) {
  cmd->add_option("--h", f.h, "Region size: radius reaches the h-th nearest neighbor")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--model", f.model, "pu-krr or pu-krr-poly")
      ->check(CLI::IsMember({"pu-krr", "pu-krr-poly"}));
  cmd->add_option("--degree", f.degree, "Polynomial tail degree")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--seed", f.seed, "Seed for the validation split");
  if (tuning) {
    cmd->add_option("--validation-fraction", f.validation_fraction,
                    "Held-out fraction for the grid search")
        ->check(CLI::Range(1e-9, 1.0 - 1e-9));
    cmd->add_option("--eta-grid", f.eta_grid, "Comma-separated ridge weights to sweep")
        ->delimiter(',');
    cmd->add_option("--sigma-mult-grid", f.sigma_mult_grid,
                    "Comma-separated bandwidth multipliers to sweep")
        ->delimiter(',');
    cmd->add_flag("--grid-default", f.grid_default,
                  "Ignore custom grids and sweep the default 5x5 grid");
  } else {
    f.eta_opt = cmd->add_option(
        "--eta", f.eta, "Ridge weight (default: 1e-4 * mean |y| per region)");
    f.eta_opt->check(CLI::PositiveNumber);
    cmd->add_option("--sigma-mult", f.sigma_mult,
                    "Bandwidth multiplier on the mean pairwise member distance")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--w0", f.w0, "Constant weight of the polynomial fallback")
        ->check(CLI::PositiveNumber);
  }
}

pureg::FitConfig make_config(const FitFlags& f) {
  pureg::FitConfig config;
  config.h = f.h;
  config.model_kind = pureg::model_kind_from_string(f.model);
  config.degree = f.degree;
  if (f.eta_opt && f.eta_opt->count() > 0) config.eta = f.eta;
  config.sigma_multiplier = f.sigma_mult;
  config.w0 = f.w0;
  config.seed = f.seed;
  config.validation_fraction = f.validation_fraction;
  if (f.grid_default) {
    config.eta_grid = pureg::FitConfig{}.eta_grid;
    config.sigma_multiplier_grid = pureg::FitConfig{}.sigma_multiplier_grid;
  } else {
    if (!f.eta_grid.empty()) config.eta_grid = f.eta_grid;
    if (!f.sigma_mult_grid.empty()) config.sigma_multiplier_grid = f.sigma_mult_grid;
  }
  return config;
}

// Queries may come as bare feature columns or as a training-style file whose
// trailing response column is ignored.
Eigen::MatrixXd load_queries(const std::string& path, int dimension) {
  pureg::CsvTable table = pureg::load_csv_table(path);
  if (table.values.cols() == dimension) return table.values;
  if (table.values.cols() == dimension + 1) {
    return table.values.leftCols(dimension);
  }
  throw pureg::DataError(path + ": expected " + std::to_string(dimension) + " or " +
                         std::to_string(dimension + 1) + " columns for a model of dimension " +
                         std::to_string(dimension) + ", got " +
                         std::to_string(table.values.cols()));
}

void write_dataset_csv(const std::string& path, const pureg::Dataset& data,
                       const std::vector<std::string>& header) {
  Eigen::MatrixXd table(data.cloud.points.rows(), data.cloud.points.cols() + 1);
  table.leftCols(data.cloud.points.cols()) = data.cloud.points;
  table.rightCols<1>() = data.cloud.responses;
  pureg::write_csv(path, header, table);
}

std::vector<std::string> gradient_header(int d) {
  std::vector<std::string> header;
  for (int i = 1; i <= d; ++i) header.push_back("dy_dx" + std::to_string(i));
  return header;
}

int run_gen_synth2d(int argc, char** argv, int n_train, std::uint64_t seed, double noise,
                    const std::string& out_dir) {
  Manifest manifest(argc, argv);
  fs::create_directories(out_dir);
  pureg::Synth2dData data = pureg::gen2d(n_train, seed, noise);

  const std::string train_path = out_dir + "/train.csv";
  const std::string test_path = out_dir + "/test.csv";
  const std::string grad_path = out_dir + "/test_gradients.csv";
  write_dataset_csv(train_path, data.train, {"x1", "x2", "y"});
  write_dataset_csv(test_path, data.test, {"x1", "x2", "y"});
  pureg::write_csv(grad_path, gradient_header(2), *data.test.gradients);

  manifest.set("seed", seed);
  manifest.set("n_train", n_train);
  manifest.set("noise_sigma", noise);
  manifest.add_output(train_path);
  manifest.add_output(test_path);
  manifest.add_output(grad_path);
  manifest.write(out_dir + "/manifest.json");
  std::printf("wrote %d training points and %lld grid points to %s\n", n_train,
              static_cast<long long>(data.test.cloud.n()), out_dir.c_str());
  return 0;
}

int run_gen_sphere(int argc, char** argv, int n, int n_train, bool density_biased,
                   std::uint64_t seed, const std::string& out_dir) {
  if (!density_biased && n_train <= 0) {
    throw std::invalid_argument("gen sphere: --n-train is required without --density-biased");
  }
  Manifest manifest(argc, argv);
  fs::create_directories(out_dir);
  pureg::SphereData data = pureg::gen_sphere(n, seed, density_biased, n_train);

  const std::string train_path = out_dir + "/train.csv";
  const std::string test_path = out_dir + "/test.csv";
  const std::string grad_path = out_dir + "/test_gradients.csv";
  write_dataset_csv(train_path, data.train, {"x1", "x2", "x3", "y"});
  write_dataset_csv(test_path, data.test, {"x1", "x2", "x3", "y"});
  pureg::write_csv(grad_path, gradient_header(3), *data.test.gradients);

  manifest.set("seed", seed);
  manifest.set("n", n);
  manifest.set("n_train", data.train.cloud.n());
  manifest.set("density_biased", density_biased);
  manifest.set("target_max", data.target_max);
  manifest.add_output(train_path);
  manifest.add_output(test_path);
  manifest.add_output(grad_path);
  manifest.write(out_dir + "/manifest.json");
  std::printf("wrote %d training and %d test points to %s\n", data.train.cloud.n(),
              data.test.cloud.n(), out_dir.c_str());
  return 0;
}

int run_fit(int argc, char** argv, const FitFlags& flags, const std::string& train_path,
            const std::string& out_path) {
  Manifest manifest(argc, argv);
  manifest.add_input(train_path);

  pureg::PointCloud cloud = pureg::load_csv(train_path);
  pureg::FitConfig config = make_config(flags);
  pureg::StitchedModel model = pureg::fit(cloud, config);
  pureg::save_model(model, out_path);

  manifest.set_config(pureg::config_to_json(config));
  manifest.set("n", cloud.n());
  manifest.set("dimension", cloud.dim());
  manifest.set("n_regions", static_cast<int>(model.cover.regions.size()));
  manifest.add_output(out_path);
  manifest.write(out_path + ".manifest.json");
  std::printf("fit %s on %d points (d=%d): %zu regions, radii [%g, %g], model in %s\n",
              pureg::to_string(config.model_kind).c_str(), cloud.n(), cloud.dim(),
              model.cover.regions.size(), model.cover.r_min, model.cover.r_max,
              out_path.c_str());
  return 0;
}

int run_tune(int argc, char** argv, const FitFlags& flags, const std::string& train_path,
             const std::string& out_path, const std::string& table_path) {
  Manifest manifest(argc, argv);
  manifest.add_input(train_path);

  pureg::PointCloud cloud = pureg::load_csv(train_path);
  pureg::FitConfig config = make_config(flags);
  pureg::GridResult result = pureg::grid_search(cloud, config);

  Eigen::MatrixXd table(
      static_cast<Eigen::Index>(result.eta_grid.size() *
                                result.sigma_multiplier_grid.size()),
      3);
  Eigen::Index row = 0;
  for (std::size_t ei = 0; ei < result.eta_grid.size(); ++ei) {
    for (std::size_t si = 0; si < result.sigma_multiplier_grid.size(); ++si) {
      table(row, 0) = result.eta_grid[ei];
      table(row, 1) = result.sigma_multiplier_grid[si];
      table(row, 2) = result.rmse_table(static_cast<Eigen::Index>(ei),
                                        static_cast<Eigen::Index>(si));
      ++row;
    }
  }
  pureg::write_csv(table_path, {"eta", "sigma_mult", "rmse"}, table);

  nlohmann::json best;
  best["format"] = "pu-tune-result";
  best["version"] = 1;
  best["best_eta"] = result.best_eta;
  best["best_sigma_multiplier"] = result.best_sigma_multiplier;
  best["best_rmse"] = result.best_rmse;
  best["tie_break_applied"] = result.tie_break_applied;
  best["config"] = pureg::config_to_json(pureg::apply_best(config, result));
  pureg::atomic_write_file(out_path, best.dump(2) + "\n");

  manifest.set_config(pureg::config_to_json(config));
  manifest.add_output(table_path);
  manifest.add_output(out_path);
  manifest.write(out_path + ".manifest.json");
  std::printf("grid search over %zu x %zu cells: best eta=%g sigma_mult=%g (rmse %.6g)%s\n",
              result.eta_grid.size(), result.sigma_multiplier_grid.size(), result.best_eta,
              result.best_sigma_multiplier, result.best_rmse,
              result.tie_break_applied ? " [tie broken toward smaller eta]" : "");
  return 0;
}

int run_predict(int argc, char** argv, const std::string& model_path,
                const std::string& queries_path, const std::string& out_path,
                bool gradients) {
  Manifest manifest(argc, argv);
  manifest.add_input(model_path);
  manifest.add_input(queries_path);

  pureg::StitchedModel model = pureg::load_model(model_path);
  Eigen::MatrixXd queries = load_queries(queries_path, model.dimension);
  if (gradients) {
    Eigen::MatrixXd grads = pureg::gradient_batch(model, queries);
    pureg::write_csv(out_path, gradient_header(model.dimension), grads);
  } else {
    Eigen::VectorXd preds = pureg::predict_batch(model, queries);
    pureg::write_csv(out_path, {"prediction"}, preds);
  }

  manifest.add_output(out_path);
  manifest.write(out_path + ".manifest.json");
  std::printf("%s for %lld queries written to %s\n",
              gradients ? "gradients" : "predictions",
              static_cast<long long>(queries.rows()), out_path.c_str());
  return 0;
}

int run_eval(int argc, char** argv, const std::string& truth_path,
             const std::string& pred_path, const std::string& out_path) {
  Manifest manifest(argc, argv);
  manifest.add_input(truth_path);
  manifest.add_input(pred_path);

  pureg::CsvTable truth = pureg::load_csv_table(truth_path);
  pureg::CsvTable preds = pureg::load_csv_table(pred_path);
  pureg::ErrorReport report =
      pureg::error_report(truth.values.rightCols<1>(), preds.values.rightCols<1>());

  nlohmann::json j;
  j["format"] = "pu-error-report";
  j["version"] = 1;
  j["rmse"] = report.rmse;
  j["max_relative_error"] = report.max_relative_error;
  j["mean_relative_error"] = report.mean_relative_error;
  j["n"] = report.n_evaluated + report.n_skipped_zero_truth;
  j["n_evaluated"] = report.n_evaluated;
  j["n_skipped_zero_truth"] = report.n_skipped_zero_truth;
  pureg::atomic_write_file(out_path, j.dump(2) + "\n");

  manifest.add_output(out_path);
  manifest.write(out_path + ".manifest.json");
  std::printf("rmse %.8g, max rel %.8g, mean rel %.8g over %d values (%d near-zero skipped)\n",
              report.rmse, report.max_relative_error, report.mean_relative_error,
              report.n_evaluated + report.n_skipped_zero_truth,
              report.n_skipped_zero_truth);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Locally adaptive regression with partition-of-unity stitching"};
  app.set_help_flag("--help", "Print help and exit");
  app.require_subcommand(1);

  // gen
  auto* gen = add_cmd(&app, "gen", "Generate benchmark datasets");
  gen->require_subcommand(1);

  int g2_n = 2000;
  std::uint64_t g2_seed = 0;
  double g2_noise = 0.0;
  std::string g2_out;
  auto* gen2d_cmd = add_cmd(gen, "synth2d", "2D plateau-and-wave surface");
  gen2d_cmd->add_option("--n-train", g2_n, "Number of training points")
      ->check(CLI::PositiveNumber);
  gen2d_cmd->add_option("--seed", g2_seed, "Generator seed");
  gen2d_cmd->add_option("--noise", g2_noise, "Additive Gaussian noise sigma")
      ->check(CLI::NonNegativeNumber);
  gen2d_cmd->add_option("--out-dir", g2_out, "Output directory")->required();

  int gs_n = 9000;
  int gs_n_train = 0;
  bool gs_density = false;
  std::uint64_t gs_seed = 0;
  std::string gs_out;
  auto* gen_sphere_cmd = add_cmd(gen, "sphere", "Cosine bells on the unit sphere");
  gen_sphere_cmd->add_option("--n", gs_n, "Lattice size")->check(CLI::PositiveNumber);
  gen_sphere_cmd->add_option("--n-train", gs_n_train,
                             "Training points (0 keeps every eligible point)");
  gen_sphere_cmd->add_flag("--density-biased", gs_density,
                           "Thin the lattice away from the bell centers");
  gen_sphere_cmd->add_option("--seed", gs_seed, "Generator seed");
  gen_sphere_cmd->add_option("--out-dir", gs_out, "Output directory")->required();

  // fit
  FitFlags fit_flags;
  std::string fit_train, fit_out;
  auto* fit_cmd = add_cmd(&app, "fit", "Fit a stitched model");
  fit_cmd->add_option("--train", fit_train, "Training CSV (features..., response)")
      ->required();
  fit_cmd->add_option("--out", fit_out, "Model JSON path")->required();
  add_fit_flags(fit_cmd, fit_flags, false);

  // tune
  FitFlags tune_flags;
  std::string tune_train, tune_out, tune_table;
  auto* tune_cmd = add_cmd(&app, "tune", "Grid-search eta and sigma multiplier");
  tune_cmd->add_option("--train", tune_train, "Training CSV")->required();
  tune_cmd->add_option("--out", tune_out, "Best-config JSON path")->required();
  tune_cmd->add_option("--table", tune_table, "Full grid RMSE table CSV path")->required();
  add_fit_flags(tune_cmd, tune_flags, true);

  // predict / gradient
  std::string pr_model, pr_queries, pr_out;
  auto* predict_cmd = add_cmd(&app, "predict", "Evaluate a saved model");
  predict_cmd->add_option("--model", pr_model, "Model JSON")->required();
  predict_cmd->add_option("--queries", pr_queries, "Query CSV")->required();
  predict_cmd->add_option("--out", pr_out, "Prediction CSV path")->required();

  std::string gr_model, gr_queries, gr_out;
  auto* gradient_cmd = add_cmd(&app, "gradient", "Evaluate a saved model's gradient");
  gradient_cmd->add_option("--model", gr_model, "Model JSON")->required();
  gradient_cmd->add_option("--queries", gr_queries, "Query CSV")->required();
  gradient_cmd->add_option("--out", gr_out, "Gradient CSV path")->required();

  // eval
  std::string ev_truth, ev_pred, ev_out;
  auto* eval_cmd = add_cmd(&app, "eval", "Compare predictions against truth");
  eval_cmd->add_option("--truth", ev_truth, "CSV whose last column is the truth")
      ->required();
  eval_cmd->add_option("--predictions", ev_pred, "CSV whose last column is the prediction")
      ->required();
  eval_cmd->add_option("--out", ev_out, "Report JSON path")->required();

  try {
    app.parse(argc, argv);
    if (gen2d_cmd->parsed()) {
      return run_gen_synth2d(argc, argv, g2_n, g2_seed, g2_noise, g2_out);
    }
    if (gen_sphere_cmd->parsed()) {
      return run_gen_sphere(argc, argv, gs_n, gs_n_train, gs_density, gs_seed, gs_out);
    }
    if (fit_cmd->parsed()) return run_fit(argc, argv, fit_flags, fit_train, fit_out);
    if (tune_cmd->parsed()) {
      return run_tune(argc, argv, tune_flags, tune_train, tune_out, tune_table);
    }
    if (predict_cmd->parsed()) {
      return run_predict(argc, argv, pr_model, pr_queries, pr_out, false);
    }
    if (gradient_cmd->parsed()) {
      return run_predict(argc, argv, gr_model, gr_queries, gr_out, true);
    }
    if (eval_cmd->parsed()) return run_eval(argc, argv, ev_truth, ev_pred, ev_out);
    return 1;
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const pureg::DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return 2;
  } catch (const pureg::NumericalError& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
