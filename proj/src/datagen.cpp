#include "pureg/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "pureg/errors.hpp"
#include "pureg/rng.hpp"

namespace pureg {

namespace {

constexpr double kPi = std::numbers::pi;

double logistic(double t) { return 1.0 / (1.0 + std::exp(-t)); }

void check_on_sphere(const Eigen::Vector3d& x) {
  if (std::abs(x.norm() - 1.0) > 1e-9) {
    throw DataError("point is not on the unit sphere");
  }
}

// Coefficient of p in the gradient of one bell: pi sin(2 pi theta) / sin(theta),
// with its theta -> 0 limit. Using sin(theta) instead of sqrt(1 - t^2) avoids
// cancellation when the query sits near the bell center.
double bell_grad_coeff(double theta) {
  if (theta >= 0.5) return 0.0;
  if (theta < 1e-7) return 2.0 * kPi * kPi;
  return kPi * std::sin(2.0 * kPi * theta) / std::sin(theta);
}

}  // namespace

double synth2d(double x1, double x2) {
  double z1 = logistic(x1) * (1.0 + 9.0 * logistic(x1 - 12.0)) *
              (1.0 + 10.0 * logistic(x1 - 24.0));
  double z2 = std::sin(x2) + std::cos(x1);
  return z1 * z2;
}

Eigen::Vector2d synth2d_grad(double x1, double x2) {
  double a = logistic(x1);
  double b = logistic(x1 - 12.0);
  double c = logistic(x1 - 24.0);
  double z1 = a * (1.0 + 9.0 * b) * (1.0 + 10.0 * c);
  double dz1 = a * (1.0 - a) * (1.0 + 9.0 * b) * (1.0 + 10.0 * c) +
               a * 9.0 * b * (1.0 - b) * (1.0 + 10.0 * c) +
               a * (1.0 + 9.0 * b) * 10.0 * c * (1.0 - c);
  double z2 = std::sin(x2) + std::cos(x1);
  return {dz1 * z2 - z1 * std::sin(x1), z1 * std::cos(x2)};
}

Synth2dData gen2d(int n_train, std::uint64_t seed, double noise_sigma) {
  if (n_train < 1) throw std::invalid_argument("gen2d: n_train must be >= 1");
  if (noise_sigma < 0.0) throw std::invalid_argument("gen2d: noise sigma must be >= 0");

  Synth2dData data;
  Rng g(seed);
  // Separate noise stream, so the same seed lays down the same points at
  // every noise level and only the responses move.
  Rng noise_g(seed ^ 0xda3e39cb94b95bdbULL);

  data.train.cloud.points.resize(n_train, 2);
  data.train.cloud.responses.resize(n_train);
  Eigen::MatrixXd train_grads(n_train, 2);
  for (int i = 0; i < n_train; ++i) {
    double x1 = uniform(g, -6.0, 30.0);
    double x2 = uniform(g, -6.0, 30.0);
    double y = synth2d(x1, x2);
    if (noise_sigma > 0.0) y += noise_sigma * normal(noise_g);
    data.train.cloud.points.row(i) << x1, x2;
    data.train.cloud.responses(i) = y;
    train_grads.row(i) = synth2d_grad(x1, x2).transpose();
  }
  data.train.gradients = std::move(train_grads);

  constexpr int kGridSide = 181;  // 0.2 spacing across [-6, 30]
  data.test.cloud.points.resize(kGridSide * kGridSide, 2);
  data.test.cloud.responses.resize(kGridSide * kGridSide);
  Eigen::MatrixXd test_grads(kGridSide * kGridSide, 2);
  for (int i = 0; i < kGridSide; ++i) {
    double x1 = -6.0 + 0.2 * i;
    for (int j = 0; j < kGridSide; ++j) {
      double x2 = -6.0 + 0.2 * j;
      int row = i * kGridSide + j;
      data.test.cloud.points.row(row) << x1, x2;
      data.test.cloud.responses(row) = synth2d(x1, x2);
      test_grads.row(row) = synth2d_grad(x1, x2).transpose();
    }
  }
  data.test.gradients = std::move(test_grads);
  return data;
}

Eigen::MatrixXd sphere_points(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sphere_points: n must be >= 1");

  Eigen::MatrixXd pts(n, 3);
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    double z = 1.0 - (2.0 * i + 1.0) / n;
    double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    double phi = golden * i;
    pts.row(i) << rho * std::cos(phi), rho * std::sin(phi), z;
  }

  // Seeded random rotation so the lattice axis differs across seeds.
  Rng g(seed);
  Eigen::Matrix3d A;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) A(r, c) = normal(g);
  Eigen::HouseholderQR<Eigen::Matrix3d> qr(A);
  Eigen::Matrix3d Q = qr.householderQ();
  if (Q.determinant() < 0.0) Q.col(2) = -Q.col(2);
  pts = pts * Q.transpose();
  for (int i = 0; i < n; ++i) pts.row(i) /= pts.row(i).norm();
  return pts;
}

Eigen::Vector3d bell_center_a() {
  return {std::cos(5.0 * kPi / 6.0), std::sin(5.0 * kPi / 6.0), 0.0};
}

Eigen::Vector3d bell_center_b() {
  return {std::cos(7.0 * kPi / 6.0), std::sin(7.0 * kPi / 6.0), 0.0};
}

double cosine_bells(const Eigen::Vector3d& x, const Eigen::Vector3d& p1,
                    const Eigen::Vector3d& p2) {
  check_on_sphere(x);
  auto bump = [](double t) {
    double theta = std::acos(std::clamp(t, -1.0, 1.0));
    return theta < 0.5 ? 0.5 * (1.0 + std::cos(2.0 * kPi * theta)) : 0.0;
  };
  return 0.1 + 0.9 * (bump(x.dot(p1)) + bump(x.dot(p2)));
}

Eigen::Vector3d cosine_bells_grad(const Eigen::Vector3d& x, const Eigen::Vector3d& p1,
                                  const Eigen::Vector3d& p2) {
  check_on_sphere(x);
  Eigen::Vector3d grad = Eigen::Vector3d::Zero();
  for (const Eigen::Vector3d& p : {p1, p2}) {
    double theta = std::acos(std::clamp(x.dot(p), -1.0, 1.0));
    grad += 0.9 * bell_grad_coeff(theta) * p;
  }
  return grad;
}

std::vector<int> density_sample(const Eigen::MatrixXd& points, const Eigen::Vector3d& c1,
                                const Eigen::Vector3d& c2, std::uint64_t seed) {
  const auto n = points.rows();
  Eigen::VectorXd d1(n), d2(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    d1(i) = (points.row(i).transpose() - c1).norm();
    d2(i) = (points.row(i).transpose() - c2).norm();
  }
  const double r1 = d1.maxCoeff();
  const double r2 = d2.maxCoeff();

  Rng g(seed);
  std::vector<int> kept;
  for (Eigen::Index i = 0; i < n; ++i) {
    double a = r1 > 0.0 ? d1(i) / r1 : 0.0;
    double b = r2 > 0.0 ? d2(i) / r2 : 0.0;
    double keep_probability = 1.0 - a * b;
    if (uniform01(g) < keep_probability) kept.push_back(static_cast<int>(i));
  }
  return kept;
}

SphereData gen_sphere(int n, std::uint64_t seed, bool density_biased, int n_train) {
  if (n < 2) throw std::invalid_argument("gen_sphere: n must be >= 2");

  Eigen::MatrixXd pts = sphere_points(n, seed);
  const Eigen::Vector3d p1 = bell_center_a();
  const Eigen::Vector3d p2 = bell_center_b();

  Eigen::VectorXd bells(n);
  Eigen::MatrixXd bell_grads(n, 3);
  for (int i = 0; i < n; ++i) {
    Eigen::Vector3d x = pts.row(i).transpose();
    bells(i) = cosine_bells(x, p1, p2);
    bell_grads.row(i) = cosine_bells_grad(x, p1, p2).transpose();
  }
  SphereData data;
  data.target_max = bells.maxCoeff();
  // Flip the surface so its global maximum falls where sampling is thinnest.
  Eigen::VectorXd y = Eigen::VectorXd::Constant(n, data.target_max) - bells;
  Eigen::MatrixXd grads = -bell_grads;

  std::vector<int> eligible;
  if (density_biased) {
    eligible = density_sample(pts, p1, p2, seed + 1);
  } else {
    eligible.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) eligible[static_cast<std::size_t>(i)] = i;
  }
  if (eligible.empty()) throw DataError("gen_sphere: density thinning kept no points");

  Rng g(seed + 2);
  std::vector<int> order = shuffled_indices(static_cast<int>(eligible.size()), g);
  int cap = n_train;
  if (cap <= 0 || cap > static_cast<int>(eligible.size())) {
    cap = static_cast<int>(eligible.size());
  }
  std::vector<int> train_rows;
  train_rows.reserve(static_cast<std::size_t>(cap));
  for (int i = 0; i < cap; ++i) {
    train_rows.push_back(eligible[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])]);
  }
  std::sort(train_rows.begin(), train_rows.end());

  std::vector<bool> in_train(static_cast<std::size_t>(n), false);
  for (int idx : train_rows) in_train[static_cast<std::size_t>(idx)] = true;
  std::vector<int> test_rows;
  for (int i = 0; i < n; ++i) {
    if (!in_train[static_cast<std::size_t>(i)]) test_rows.push_back(i);
  }
  if (test_rows.empty()) {
    throw DataError("gen_sphere: every lattice point went to training, nothing to test on");
  }

  auto gather = [&](const std::vector<int>& rows) {
    Dataset out;
    const auto m = static_cast<Eigen::Index>(rows.size());
    out.cloud.points.resize(m, 3);
    out.cloud.responses.resize(m);
    Eigen::MatrixXd gr(m, 3);
    for (Eigen::Index i = 0; i < m; ++i) {
      int idx = rows[static_cast<std::size_t>(i)];
      out.cloud.points.row(i) = pts.row(idx);
      out.cloud.responses(i) = y(idx);
      gr.row(i) = grads.row(idx);
    }
    out.gradients = std::move(gr);
    return out;
  };
  data.train = gather(train_rows);
  data.test = gather(test_rows);
  return data;
}

}  // namespace pureg
