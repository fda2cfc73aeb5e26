// End-to-end tests that drive the installed CLI binary as a subprocess and
// cross-check its file outputs against the library called in-process.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <string>

#include <json.hpp>

#include "pureg/csv.hpp"
#include "pureg/datagen.hpp"
#include "pureg/fs_util.hpp"
#include "pureg/metrics.hpp"
#include "pureg/model_io.hpp"
#include "pureg/stitched_model.hpp"
#include "pureg/tuning.hpp"
#include "support.hpp"

using namespace pureg;
using pureg::test::TempDir;

namespace {

std::string shell_quote(const std::string& s) { return "\"" + s + "\""; }

int run_cli(const std::string& args) {
  std::string cmd = shell_quote(PUREG_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

nlohmann::json read_json(const std::string& path) {
  return nlohmann::json::parse(read_file(path));
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("gen synth2d writes deterministic datasets with manifests") {
  TempDir dir;
  std::string a = dir.file("a");
  std::string b = dir.file("b");
  REQUIRE(run_cli("gen synth2d --n-train 60 --seed 3 --out-dir " + shell_quote(a)) == 0);

  // CSV round trip is bitwise, so files must reproduce the library exactly
  Synth2dData expect = gen2d(60, 3);
  PointCloud train = load_csv(a + "/train.csv");
  REQUIRE(train.n() == 60);
  REQUIRE(train.dim() == 2);
  CHECK((train.points - expect.train.cloud.points).norm() == 0.0);
  CHECK((train.responses - expect.train.cloud.responses).norm() == 0.0);

  PointCloud grid = load_csv(a + "/test.csv");
  REQUIRE(grid.n() == 32761);
  CHECK((grid.responses - expect.test.cloud.responses).norm() == 0.0);

  CsvTable grads = load_csv_table(a + "/test_gradients.csv");
  CHECK(grads.had_header);
  CHECK(grads.values.cols() == 2);
  CHECK((grads.values - *expect.test.gradients).norm() == 0.0);

  nlohmann::json manifest = read_json(a + "/manifest.json");
  CHECK(manifest.at("format") == "pu-run-manifest");
  CHECK(manifest.at("seed") == 3);
  std::string train_path = a + "/train.csv";
  CHECK(manifest.at("outputs").at(train_path) == hash_file_hex(train_path));

  // identical invocation, identical bytes
  REQUIRE(run_cli("gen synth2d --n-train 60 --seed 3 --out-dir " + shell_quote(b)) == 0);
  CHECK(hash_file_hex(a + "/train.csv") == hash_file_hex(b + "/train.csv"));
  CHECK(hash_file_hex(a + "/test.csv") == hash_file_hex(b + "/test.csv"));
  CHECK(hash_file_hex(a + "/test_gradients.csv") == hash_file_hex(b + "/test_gradients.csv"));
}

TEST_CASE("gen sphere matches the library and validates flags") {
  TempDir dir;
  std::string out = dir.file("s");
  REQUIRE(run_cli("gen sphere --n 500 --n-train 200 --seed 5 --out-dir " + shell_quote(out)) == 0);

  SphereData expect = gen_sphere(500, 5, false, 200);
  PointCloud train = load_csv(out + "/train.csv");
  PointCloud test = load_csv(out + "/test.csv");
  REQUIRE(train.n() == 200);
  REQUIRE(train.dim() == 3);
  REQUIRE(test.n() == 300);
  CHECK((train.points - expect.train.cloud.points).norm() == 0.0);
  CHECK((test.responses - expect.test.cloud.responses).norm() == 0.0);

  nlohmann::json manifest = read_json(out + "/manifest.json");
  CHECK(manifest.at("target_max") == expect.target_max);

  // thinning keeps every eligible point when no cap is given
  std::string biased = dir.file("sb");
  REQUIRE(run_cli("gen sphere --n 400 --density-biased --seed 7 --out-dir " +
                  shell_quote(biased)) == 0);
  PointCloud biased_train = load_csv(biased + "/train.csv");
  SphereData biased_expect = gen_sphere(400, 7, true, 0);
  CHECK(biased_train.n() == biased_expect.train.cloud.n());

  // without the bias flag a training cap is mandatory
  CHECK(run_cli("gen sphere --n 400 --seed 7 --out-dir " + shell_quote(dir.file("sx"))) == 1);
}

TEST_CASE("fit, predict, and gradient agree with in-process calls") {
  TempDir dir;
  std::string data = dir.file("data");
  REQUIRE(run_cli("gen synth2d --n-train 150 --seed 11 --out-dir " + shell_quote(data)) == 0);

  std::string model_path = dir.file("model.json");
  REQUIRE(run_cli("fit --train " + shell_quote(data + "/train.csv") + " --out " +
                  shell_quote(model_path) + " --h 25 --seed 1") == 0);

  StitchedModel model = load_model(model_path);
  CHECK(model.dimension == 2);
  CHECK(model.config.h == 25);
  CHECK(!model.cover.regions.empty());

  nlohmann::json manifest = read_json(model_path + ".manifest.json");
  CHECK(manifest.at("n") == 150);
  CHECK(manifest.at("n_regions") == static_cast<int>(model.cover.regions.size()));
  CHECK(manifest.at("config").at("h") == 25);

  // a fresh fit from the same inputs is byte-identical
  std::string model2 = dir.file("model2.json");
  REQUIRE(run_cli("fit --train " + shell_quote(data + "/train.csv") + " --out " +
                  shell_quote(model2) + " --h 25 --seed 1") == 0);
  CHECK(hash_file_hex(model_path) == hash_file_hex(model2));

  // queries as bare feature columns
  Rng g(12);
  Eigen::MatrixXd queries(25, 2);
  for (Eigen::Index i = 0; i < queries.size(); ++i) queries(i) = uniform(g, -6, 30);
  std::string queries_path = dir.file("queries.csv");
  write_csv(queries_path, {}, queries);

  std::string preds_path = dir.file("preds.csv");
  REQUIRE(run_cli("predict --model " + shell_quote(model_path) + " --queries " +
                  shell_quote(queries_path) + " --out " + shell_quote(preds_path)) == 0);
  CsvTable preds = load_csv_table(preds_path);
  CHECK(preds.had_header);
  CHECK(preds.header == std::vector<std::string>{"prediction"});
  REQUIRE(preds.values.rows() == 25);
  REQUIRE(preds.values.cols() == 1);
  Eigen::VectorXd expect = predict_batch(model, queries);
  CHECK((preds.values.col(0) - expect).norm() == 0.0);

  // training-style query file: the trailing response column is ignored
  Eigen::MatrixXd with_y(25, 3);
  with_y.leftCols(2) = queries;
  with_y.col(2).setConstant(99.0);
  std::string trainlike_path = dir.file("queries_y.csv");
  write_csv(trainlike_path, {"x1", "x2", "y"}, with_y);
  std::string preds2_path = dir.file("preds2.csv");
  REQUIRE(run_cli("predict --model " + shell_quote(model_path) + " --queries " +
                  shell_quote(trainlike_path) + " --out " + shell_quote(preds2_path)) == 0);
  CsvTable preds2 = load_csv_table(preds2_path);
  CHECK((preds2.values - preds.values).norm() == 0.0);

  // gradients: one column per input dimension
  std::string grads_path = dir.file("grads.csv");
  REQUIRE(run_cli("gradient --model " + shell_quote(model_path) + " --queries " +
                  shell_quote(queries_path) + " --out " + shell_quote(grads_path)) == 0);
  CsvTable grads = load_csv_table(grads_path);
  CHECK(grads.header == std::vector<std::string>{"dy_dx1", "dy_dx2"});
  REQUIRE(grads.values.rows() == 25);
  REQUIRE(grads.values.cols() == 2);
  CHECK((grads.values - gradient_batch(model, queries)).norm() == 0.0);
}

TEST_CASE("tune writes the full table and a ready-to-use config") {
  TempDir dir;
  std::string data = dir.file("data");
  REQUIRE(run_cli("gen synth2d --n-train 80 --seed 13 --out-dir " + shell_quote(data)) == 0);

  std::string best_path = dir.file("best.json");
  std::string table_path = dir.file("grid.csv");
  REQUIRE(run_cli("tune --train " + shell_quote(data + "/train.csv") + " --out " +
                  shell_quote(best_path) + " --table " + shell_quote(table_path) +
                  " --h 15 --seed 4 --eta-grid 1e-3,1e-4 --sigma-mult-grid 0.5,1.0") == 0);

  FitConfig config;
  config.h = 15;
  config.seed = 4;
  config.eta_grid = {1e-3, 1e-4};
  config.sigma_multiplier_grid = {0.5, 1.0};
  GridResult expect = grid_search(load_csv(data + "/train.csv"), config);

  CsvTable table = load_csv_table(table_path);
  CHECK(table.header == std::vector<std::string>{"eta", "sigma_mult", "rmse"});
  REQUIRE(table.values.rows() == 4);
  // rows sweep eta-major, matching the table layout
  CHECK(table.values(0, 0) == 1e-3);
  CHECK(table.values(0, 1) == 0.5);
  CHECK(table.values(0, 2) == expect.rmse_table(0, 0));
  CHECK(table.values(3, 2) == expect.rmse_table(1, 1));

  nlohmann::json best = read_json(best_path);
  CHECK(best.at("format") == "pu-tune-result");
  CHECK(best.at("best_eta") == expect.best_eta);
  CHECK(best.at("best_sigma_multiplier") == expect.best_sigma_multiplier);
  CHECK(best.at("best_rmse") == expect.best_rmse);

  // the embedded config is loadable and carries the winning cell
  FitConfig tuned = config_from_json(best.at("config"));
  REQUIRE(tuned.eta.has_value());
  CHECK(*tuned.eta == expect.best_eta);
  CHECK(tuned.sigma_multiplier == expect.best_sigma_multiplier);
}

TEST_CASE("eval reproduces the library error report") {
  TempDir dir;
  Eigen::MatrixXd truth(5, 2);
  truth << 0, 1.0, 1, 2.0, 2, 3.0, 3, 4.0, 4, 5.0;
  Eigen::MatrixXd preds(5, 1);
  preds << 1.1, 1.9, 3.2, 3.9, 5.05;
  std::string truth_path = dir.file("truth.csv");
  std::string preds_path = dir.file("preds.csv");
  write_csv(truth_path, {"x", "y"}, truth);
  write_csv(preds_path, {"prediction"}, preds);

  std::string report_path = dir.file("report.json");
  REQUIRE(run_cli("eval --truth " + shell_quote(truth_path) + " --predictions " +
                  shell_quote(preds_path) + " --out " + shell_quote(report_path)) == 0);

  ErrorReport expect = error_report(truth.col(1), preds.col(0));
  nlohmann::json report = read_json(report_path);
  CHECK(report.at("format") == "pu-error-report");
  CHECK(report.at("rmse") == expect.rmse);
  CHECK(report.at("max_relative_error") == expect.max_relative_error);
  CHECK(report.at("mean_relative_error") == expect.mean_relative_error);
  CHECK(report.at("n") == 5);

  // identical files score a clean zero
  std::string same_path = dir.file("same.csv");
  write_csv(same_path, {"prediction"}, truth.rightCols(1));
  std::string zero_report = dir.file("zero.json");
  REQUIRE(run_cli("eval --truth " + shell_quote(truth_path) + " --predictions " +
                  shell_quote(same_path) + " --out " + shell_quote(zero_report)) == 0);
  CHECK(read_json(zero_report).at("rmse") == 0.0);
}

TEST_CASE("exit codes") {
  TempDir dir;
  CHECK(run_cli("--help") == 0);
  CHECK(run_cli("fit --help") == 0);
  CHECK(run_cli("") == 1);                  // a subcommand is required
  CHECK(run_cli("frobnicate") == 1);        // unknown subcommand
  CHECK(run_cli("fit --out x.json") == 1);  // missing required --train

  // well-formed command, missing input file
  CHECK(run_cli("fit --train " + shell_quote(dir.file("absent.csv")) + " --out " +
                shell_quote(dir.file("m.json"))) == 2);

  // malformed CSV surfaces as a data error
  std::string bad = dir.file("bad.csv");
  std::ofstream(bad) << "1,2\n3\n";
  CHECK(run_cli("fit --train " + shell_quote(bad) + " --out " + shell_quote(dir.file("m.json"))) == 2);

  CHECK(run_cli("predict --model " + shell_quote(dir.file("no.json")) + " --queries " +
                shell_quote(bad) + " --out " + shell_quote(dir.file("p.csv"))) == 2);
}

}  // TEST_SUITE
