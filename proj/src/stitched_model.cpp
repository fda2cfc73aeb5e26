#include "pureg/stitched_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pureg/errors.hpp"
#include "pureg/kernels.hpp"
#include "pureg/rng.hpp"

namespace pureg {

namespace {

void check_config(const FitConfig& config) {
  if (config.h < 1) throw std::invalid_argument("fit: h must be >= 1");
  if (config.degree < 0) throw std::invalid_argument("fit: degree must be >= 0");
  if (config.eta && !(*config.eta > 0.0)) {
    throw std::invalid_argument("fit: eta must be positive");
  }
  if (!(config.sigma_multiplier > 0.0)) {
    throw std::invalid_argument("fit: sigma multiplier must be positive");
  }
  if (!(config.w0 > 0.0)) throw std::invalid_argument("fit: w0 must be positive");
  if (!(config.svd_threshold > 0.0)) {
    throw std::invalid_argument("fit: svd threshold must be positive");
  }
  if (config.fallback_subsample < 1) {
    throw std::invalid_argument("fit: fallback subsample must be >= 1");
  }
  if (!(config.fallback_sigma_multiplier > 0.0) || !(config.fallback_eta_scale > 0.0)) {
    throw std::invalid_argument("fit: fallback sigma multiplier and eta scale must be positive");
  }
}

void check_query(const StitchedModel& model, const Eigen::VectorXd& q) {
  if (q.size() != model.dimension) {
    throw DataError("query has dimension " + std::to_string(q.size()) +
                    ", model expects " + std::to_string(model.dimension));
  }
  if (!q.allFinite()) throw DataError("query contains NaN or Inf");
}

}  // namespace

double region_default_eta(const Eigen::VectorXd& y) {
  double eta = 1e-4 * y.cwiseAbs().mean();
  return eta > 0.0 ? eta : 1e-12;  // keep the ridge positive for all-zero responses
}

LocalModel fit_fallback(const PointCloud& cloud, const FitConfig& config) {
  cloud.validate();
  check_config(config);

  const int n = cloud.n();
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  if (n <= config.fallback_subsample) {
    X = cloud.points;
    y = cloud.responses;
  } else {
    // Seed offset decorrelates the subsample from the validation split,
    // which feeds config.seed to its generator directly.
    Rng g(config.seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<int> order = shuffled_indices(n, g);
    X.resize(config.fallback_subsample, cloud.dim());
    y.resize(config.fallback_subsample);
    for (int i = 0; i < config.fallback_subsample; ++i) {
      X.row(i) = cloud.points.row(order[static_cast<std::size_t>(i)]);
      y(i) = cloud.responses(order[static_cast<std::size_t>(i)]);
    }
  }

  double scale = 1.0;
  if (X.rows() >= 2) {
    try {
      scale = mean_pairwise_distance(X);
    } catch (const DataError&) {
      scale = 1.0;  // every subsampled point coincides
    }
  }
  double sigma = config.fallback_sigma_multiplier * scale;
  double eta = std::max(config.fallback_eta_scale * y.cwiseAbs().mean(), 1e-12);
  try {
    return fit_krr_poly(X, y, sigma, eta, config.degree, config.svd_threshold);
  } catch (const std::exception& e) {
    throw NumericalError(std::string("fallback: ") + e.what());
  }
}

StitchedModel fit(const PointCloud& cloud, const FitConfig& config) {
  cloud.validate();
  check_config(config);

  StitchedModel model;
  model.dimension = cloud.dim();
  model.config = config;
  model.w0 = config.w0;
  model.cover = build_cover(cloud, config.h);

  // Bandwidth fallback for regions whose members all coincide.
  double global_scale = -1.0;
  auto cloud_scale = [&]() {
    if (global_scale < 0.0) {
      try {
        global_scale = mean_pairwise_distance(cloud.points);
      } catch (const std::exception&) {
        global_scale = 1.0;
      }
    }
    return global_scale;
  };

  model.locals.reserve(model.cover.regions.size());
  for (const Region& region : model.cover.regions) {
    const auto m = static_cast<Eigen::Index>(region.member_indices.size());
    Eigen::MatrixXd X(m, cloud.dim());
    Eigen::VectorXd y(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      int idx = region.member_indices[static_cast<std::size_t>(i)];
      X.row(i) = cloud.points.row(idx);
      y(i) = cloud.responses(idx);
    }

    double scale;
    try {
      scale = m >= 2 ? mean_pairwise_distance(X) : cloud_scale();
    } catch (const DataError&) {
      scale = cloud_scale();
    }
    double sigma = config.sigma_multiplier * scale;
    double eta = config.eta ? *config.eta : region_default_eta(y);

    try {
      if (config.model_kind == ModelKind::PuKrrPoly) {
        model.locals.push_back(
            fit_krr_poly(X, y, sigma, eta, config.degree, config.svd_threshold));
      } else {
        model.locals.push_back(fit_krr(X, y, sigma, eta));
      }
    } catch (const std::exception& e) {
      throw NumericalError("region " + std::to_string(region.id) + ": " + e.what());
    }
  }

  model.fallback = fit_fallback(cloud, config);
  return model;
}

PuWeights pu_weights(const StitchedModel& model, const Eigen::VectorXd& q) {
  check_query(model, q);

  PuWeights w;
  w.region_ids = model.cover.regions_containing(q);
  w.raw.reserve(w.region_ids.size());
  for (int id : w.region_ids) {
    const Region& r = model.cover.regions[static_cast<std::size_t>(id)];
    w.raw.push_back(wendland((q - r.center).norm(), r.radius));
  }
  w.fallback_raw = model.w0;
  w.total = w.fallback_raw;
  for (double v : w.raw) w.total += v;
  w.normalized.reserve(w.raw.size());
  for (double v : w.raw) w.normalized.push_back(v / w.total);
  w.fallback_normalized = w.fallback_raw / w.total;
  return w;
}

PuWeightGradients pu_weight_gradients(const StitchedModel& model, const Eigen::VectorXd& q) {
  PuWeightGradients g;
  g.weights = pu_weights(model, q);
  const auto k = static_cast<Eigen::Index>(g.weights.region_ids.size());
  const Eigen::Index d = q.size();

  // Raw weight gradients: dw_j/dq = phi'(v) (q - c_j) / v, with the v -> 0
  // limit 0 (phi' vanishes linearly at the center).
  Eigen::MatrixXd raw_grads = Eigen::MatrixXd::Zero(k, d);
  for (Eigen::Index i = 0; i < k; ++i) {
    const Region& r = model.cover.regions[static_cast<std::size_t>(
        g.weights.region_ids[static_cast<std::size_t>(i)])];
    Eigen::VectorXd diff = q - r.center;
    double v = diff.norm();
    if (v >= 1e-12 * r.radius) {
      raw_grads.row(i) = (wendland_deriv(v, r.radius) / v) * diff.transpose();
    }
  }

  Eigen::VectorXd denom_grad = raw_grads.colwise().sum().transpose();
  const double W = g.weights.total;

  // Quotient rule for w_j / W; the fallback's raw weight is constant so only
  // the denominator term survives there.
  g.region_grads.resize(k, d);
  for (Eigen::Index i = 0; i < k; ++i) {
    g.region_grads.row(i) =
        (raw_grads.row(i) * W - g.weights.raw[static_cast<std::size_t>(i)] *
                                    denom_grad.transpose()) /
        (W * W);
  }
  g.fallback_grad = -(g.weights.fallback_raw / (W * W)) * denom_grad;
  return g;
}

double predict(const StitchedModel& model, const Eigen::VectorXd& q) {
  PuWeights w = pu_weights(model, q);
  double value = 0.0;
  for (std::size_t i = 0; i < w.region_ids.size(); ++i) {
    const LocalModel& local = model.locals[static_cast<std::size_t>(w.region_ids[i])];
    value += w.normalized[i] * eval_local(local, q);
  }
  value += w.fallback_normalized * eval_local(model.fallback, q);
  return value;
}

Eigen::VectorXd predict_batch(const StitchedModel& model, const Eigen::MatrixXd& queries) {
  Eigen::VectorXd out(queries.rows());
  for (Eigen::Index i = 0; i < queries.rows(); ++i) {
    out(i) = predict(model, queries.row(i).transpose());
  }
  return out;
}

Eigen::VectorXd gradient(const StitchedModel& model, const Eigen::VectorXd& q) {
  PuWeightGradients g = pu_weight_gradients(model, q);
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(q.size());
  for (std::size_t i = 0; i < g.weights.region_ids.size(); ++i) {
    const LocalModel& local =
        model.locals[static_cast<std::size_t>(g.weights.region_ids[i])];
    grad += eval_local(local, q) * g.region_grads.row(static_cast<Eigen::Index>(i)).transpose();
    grad += g.weights.normalized[i] * grad_local(local, q);
  }
  grad += eval_local(model.fallback, q) * g.fallback_grad;
  grad += g.weights.fallback_normalized * grad_local(model.fallback, q);
  return grad;
}

Eigen::MatrixXd gradient_batch(const StitchedModel& model, const Eigen::MatrixXd& queries) {
  Eigen::MatrixXd out(queries.rows(), queries.cols());
  for (Eigen::Index i = 0; i < queries.rows(); ++i) {
    out.row(i) = gradient(model, queries.row(i).transpose()).transpose();
  }
  return out;
}

}  // namespace pureg
