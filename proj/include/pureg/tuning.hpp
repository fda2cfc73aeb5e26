#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "pureg/config.hpp"
#include "pureg/point_cloud.hpp"

namespace pureg {

// Seeded train/validation split; both index lists are sorted ascending.
// floor(fraction * n) points go to validation. Throws std::invalid_argument
// unless 0 < fraction < 1, DataError when either side would be empty.
struct SplitIndices {
  std::vector<int> train;
  std::vector<int> validation;
};
SplitIndices split_train_validation(int n, double fraction, std::uint64_t seed);

// Outcome of a full grid sweep. rmse_table(i, j) is the validation RMSE for
// eta_grid[i] x sigma_multiplier_grid[j]. Cells whose RMSE is within a tiny
// relative tolerance of the minimum count as tied; ties resolve to the
// smaller eta, then the smaller multiplier, and set tie_break_applied.
struct GridResult {
  std::vector<double> eta_grid;
  std::vector<double> sigma_multiplier_grid;
  Eigen::MatrixXd rmse_table;
  double best_eta = 0.0;
  double best_sigma_multiplier = 0.0;
  double best_rmse = 0.0;
  bool tie_break_applied = false;
};

// Sweeps config.eta_grid x config.sigma_multiplier_grid. The region cover
// and per-region bandwidth baselines are built once from the training split;
// every cell refits the local models and scores on the held-out split, which
// never influences any fit. Throws std::invalid_argument for empty grids.
GridResult grid_search(const PointCloud& cloud, const FitConfig& config);

// Copy of config with the winning cell filled in, ready for a final fit.
FitConfig apply_best(FitConfig config, const GridResult& result);

}  // namespace pureg
