#pragma once

#include <Eigen/Dense>
#include <vector>

#include "pureg/config.hpp"
#include "pureg/local_model.hpp"
#include "pureg/point_cloud.hpp"
#include "pureg/spatial_cover.hpp"

namespace pureg {

// Partition-of-unity weights at one query point. Each region containing the
// query gets a Wendland bump of its own radius; a constant w0 plays the role
// of a region covering all of space, so the denominator never vanishes and
// the model stays defined outside every ball.
struct PuWeights {
  std::vector<int> region_ids;      // ascending
  std::vector<double> raw;          // Wendland values, one per region id
  std::vector<double> normalized;   // raw / total
  double fallback_raw = 0.0;        // = w0
  double fallback_normalized = 0.0;
  double total = 0.0;               // sum of raw + w0
};

// Query-gradients of the normalized weights; rows follow weights.region_ids.
// The raw fallback weight is constant, but its normalized share still moves
// with the denominator, hence fallback_grad.
struct PuWeightGradients {
  PuWeights weights;
  Eigen::MatrixXd region_grads;  // k x d
  Eigen::VectorXd fallback_grad;
};

// The stitched predictor: local models blended by normalized Wendland
// weights, plus a global backstop model carrying the constant weight.
// Immutable after fit; all queries are const and safe to run concurrently.
struct StitchedModel {
  RegionCover cover;
  std::vector<LocalModel> locals;  // one per region, same order
  LocalModel fallback;             // the infinite region's model
  double w0 = 1e-5;
  int dimension = 0;
  FitConfig config;
};

// Builds the cover, fits one local model per region (sigma from the region's
// mean pairwise member distance times config.sigma_multiplier, eta from
// config or the per-region default), and fits the fallback. Solver failures
// are rethrown as NumericalError tagged with the region id.
StitchedModel fit(const PointCloud& cloud, const FitConfig& config);

// Fits the infinite region's model: KRR-POLY on a seeded subsample of at most
// config.fallback_subsample points (the whole cloud when it is smaller), with
// the tighter fallback bandwidth and ridge defaults. Far from the data the
// kernel term dies off and the polynomial tail takes over, so distant queries
// degrade to a global degree-l trend instead of exploding.
LocalModel fit_fallback(const PointCloud& cloud, const FitConfig& config);

// Default per-region ridge weight, 1e-4 * mean(|y|), floored at 1e-12 so it
// stays positive when every response is zero.
double region_default_eta(const Eigen::VectorXd& y);

PuWeights pu_weights(const StitchedModel& model, const Eigen::VectorXd& q);

PuWeightGradients pu_weight_gradients(const StitchedModel& model, const Eigen::VectorXd& q);

double predict(const StitchedModel& model, const Eigen::VectorXd& q);

Eigen::VectorXd predict_batch(const StitchedModel& model, const Eigen::MatrixXd& queries);

// Exact gradient of predict: product rule over the normalized weights and
// the local models, including the fallback share's motion.
Eigen::VectorXd gradient(const StitchedModel& model, const Eigen::VectorXd& q);

Eigen::MatrixXd gradient_batch(const StitchedModel& model, const Eigen::MatrixXd& queries);

}  // namespace pureg
