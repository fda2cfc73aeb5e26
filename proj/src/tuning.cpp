#include "pureg/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pureg/errors.hpp"
#include "pureg/kernels.hpp"
#include "pureg/metrics.hpp"
#include "pureg/rng.hpp"
#include "pureg/stitched_model.hpp"

namespace pureg {

SplitIndices split_train_validation(int n, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw std::invalid_argument("split: fraction must be in (0, 1)");
  }
  const int n_val = static_cast<int>(std::floor(fraction * n));
  if (n_val < 1) throw DataError("split: validation set would be empty");
  if (n_val >= n) throw DataError("split: training set would be empty");

  Rng g(seed);
  std::vector<int> perm = shuffled_indices(n, g);
  SplitIndices split;
  split.validation.assign(perm.begin(), perm.begin() + n_val);
  split.train.assign(perm.begin() + n_val, perm.end());
  std::sort(split.validation.begin(), split.validation.end());
  std::sort(split.train.begin(), split.train.end());
  return split;
}

GridResult grid_search(const PointCloud& cloud, const FitConfig& config) {
  cloud.validate();
  if (config.eta_grid.empty() || config.sigma_multiplier_grid.empty()) {
    throw std::invalid_argument("grid search: grids must be non-empty");
  }

  SplitIndices split =
      split_train_validation(cloud.n(), config.validation_fraction, config.seed);
  PointCloud train = cloud.subset(split.train);
  Eigen::MatrixXd val_points(static_cast<Eigen::Index>(split.validation.size()),
                             cloud.dim());
  Eigen::VectorXd val_truth(static_cast<Eigen::Index>(split.validation.size()));
  for (std::size_t i = 0; i < split.validation.size(); ++i) {
    val_points.row(static_cast<Eigen::Index>(i)) = cloud.points.row(split.validation[i]);
    val_truth(static_cast<Eigen::Index>(i)) = cloud.responses(split.validation[i]);
  }

  // Geometry is shared by every cell: one cover, one bandwidth baseline and
  // member slice per region, one fallback.
  RegionCover cover = build_cover(train, config.h);
  double global_scale = -1.0;
  auto train_scale = [&]() {
    if (global_scale < 0.0) {
      try {
        global_scale = mean_pairwise_distance(train.points);
      } catch (const std::exception&) {
        global_scale = 1.0;
      }
    }
    return global_scale;
  };

  const auto n_regions = cover.regions.size();
  std::vector<Eigen::MatrixXd> region_X(n_regions);
  std::vector<Eigen::VectorXd> region_y(n_regions);
  std::vector<double> region_scale(n_regions);
  for (std::size_t j = 0; j < n_regions; ++j) {
    const Region& region = cover.regions[j];
    const auto m = static_cast<Eigen::Index>(region.member_indices.size());
    region_X[j].resize(m, train.dim());
    region_y[j].resize(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      int idx = region.member_indices[static_cast<std::size_t>(i)];
      region_X[j].row(i) = train.points.row(idx);
      region_y[j](i) = train.responses(idx);
    }
    try {
      region_scale[j] = m >= 2 ? mean_pairwise_distance(region_X[j]) : train_scale();
    } catch (const DataError&) {
      region_scale[j] = train_scale();
    }
  }
  LocalModel fallback = fit_fallback(train, config);

  GridResult result;
  result.eta_grid = config.eta_grid;
  result.sigma_multiplier_grid = config.sigma_multiplier_grid;
  result.rmse_table.resize(static_cast<Eigen::Index>(config.eta_grid.size()),
                           static_cast<Eigen::Index>(config.sigma_multiplier_grid.size()));

  for (std::size_t ei = 0; ei < config.eta_grid.size(); ++ei) {
    for (std::size_t si = 0; si < config.sigma_multiplier_grid.size(); ++si) {
      const double eta = config.eta_grid[ei];
      const double mult = config.sigma_multiplier_grid[si];

      StitchedModel model;
      model.dimension = train.dim();
      model.config = config;
      model.config.eta = eta;
      model.config.sigma_multiplier = mult;
      model.w0 = config.w0;
      model.cover = cover;
      model.fallback = fallback;
      model.locals.reserve(n_regions);
      for (std::size_t j = 0; j < n_regions; ++j) {
        double sigma = mult * region_scale[j];
        try {
          if (config.model_kind == ModelKind::PuKrrPoly) {
            model.locals.push_back(fit_krr_poly(region_X[j], region_y[j], sigma, eta,
                                                config.degree, config.svd_threshold));
          } else {
            model.locals.push_back(fit_krr(region_X[j], region_y[j], sigma, eta));
          }
        } catch (const std::exception& e) {
          throw NumericalError("grid cell eta=" + std::to_string(eta) +
                               " mult=" + std::to_string(mult) + ", region " +
                               std::to_string(j) + ": " + e.what());
        }
      }

      Eigen::VectorXd preds = predict_batch(model, val_points);
      result.rmse_table(static_cast<Eigen::Index>(ei), static_cast<Eigen::Index>(si)) =
          error_report(val_truth, preds).rmse;
    }
  }

  // Winner: the smallest RMSE, where anything within a hair of the minimum
  // counts as equal so that float noise cannot decide between cells that are
  // mathematically tied. Ties resolve by value, smallest eta first and then
  // smallest multiplier, regardless of grid ordering.
  const double min_rmse = result.rmse_table.minCoeff();
  const double tie_tol = min_rmse * 1e-9 + 1e-12;
  int tied = 0;
  bool chosen = false;
  for (std::size_t ei = 0; ei < config.eta_grid.size(); ++ei) {
    for (std::size_t si = 0; si < config.sigma_multiplier_grid.size(); ++si) {
      double v = result.rmse_table(static_cast<Eigen::Index>(ei),
                                   static_cast<Eigen::Index>(si));
      if (v > min_rmse + tie_tol) continue;
      ++tied;
      double eta = config.eta_grid[ei];
      double mult = config.sigma_multiplier_grid[si];
      if (!chosen || eta < result.best_eta ||
          (eta == result.best_eta && mult < result.best_sigma_multiplier)) {
        result.best_eta = eta;
        result.best_sigma_multiplier = mult;
        result.best_rmse = v;
        chosen = true;
      }
    }
  }
  result.tie_break_applied = tied > 1;
  return result;
}

FitConfig apply_best(FitConfig config, const GridResult& result) {
  config.eta = result.best_eta;
  config.sigma_multiplier = result.best_sigma_multiplier;
  return config;
}

}  // namespace pureg
