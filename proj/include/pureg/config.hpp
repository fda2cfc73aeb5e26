#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace pureg {

enum class ModelKind { PuKrr, PuKrrPoly };

// Everything that determines a fit or a tuning run. Seeded randomness only
// enters through the validation split and the data generators; fitting
// itself is deterministic for a given cloud and config.
struct FitConfig {
  int h = 100;  // region size: radius reaches the h-th nearest neighbor
  ModelKind model_kind = ModelKind::PuKrrPoly;
  int degree = 2;  // polynomial tail degree for the poly variant and fallback

  // Per-region ridge weight; when absent each region uses
  // 1e-4 * mean(|y_j|) over its own members.
  std::optional<double> eta;
  // Region bandwidth = multiplier * mean pairwise distance of its members.
  double sigma_multiplier = 1.0;

  // Grid search axes.
  std::vector<double> eta_grid = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5};
  std::vector<double> sigma_multiplier_grid = {0.25, 0.5, 1.0, 2.0, 5.0};

  double svd_threshold = 1e-10;  // relative singular value cutoff
  double w0 = 1e-5;              // constant weight of the fallback term

  // The infinite region's own model: KRR-POLY on a seeded subsample of at
  // most fallback_subsample points. Its bandwidth wants to be much tighter
  // than the regions' (the subsample spans the whole cloud, so the mean
  // pairwise distance is domain-sized), and its ridge smaller, since this
  // model is what shows through wherever the balls run thin.
  int fallback_subsample = 2000;
  double fallback_sigma_multiplier = 0.1;
  double fallback_eta_scale = 1e-6;  // eta = scale * mean(|y|) of the subsample

  std::uint64_t seed = 0;
  double validation_fraction = 0.2;
};

}  // namespace pureg
