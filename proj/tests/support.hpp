#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <functional>
#include <string>
#include <system_error>

#include "pureg/point_cloud.hpp"
#include "pureg/rng.hpp"

namespace pureg::test {

// Central finite-difference gradient of a scalar function; the oracle used
// against every analytic gradient in the suite.
inline Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& q, double step) {
  Eigen::VectorXd g(q.size());
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    Eigen::VectorXd hi = q, lo = q;
    hi(i) += step;
    lo(i) -= step;
    g(i) = (f(hi) - f(lo)) / (2.0 * step);
  }
  return g;
}

// Uniform cloud in [lo, hi]^d with responses from `target`.
inline PointCloud random_cloud(int n, int d, std::uint64_t seed, double lo, double hi,
                               const std::function<double(const Eigen::VectorXd&)>& target) {
  Rng g(seed);
  PointCloud cloud;
  cloud.points.resize(n, d);
  cloud.responses.resize(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) cloud.points(i, j) = uniform(g, lo, hi);
    cloud.responses(i) = target(cloud.points.row(i).transpose());
  }
  return cloud;
}

// Scratch directory removed on scope exit.
struct TempDir {
  std::filesystem::path path;

  TempDir() {
    auto base = std::filesystem::temp_directory_path();
    Rng g(std::random_device{}());
    for (int attempt = 0; attempt < 100; ++attempt) {
      auto candidate = base / ("pureg-test-" + std::to_string(g()));
      std::error_code ec;
      if (std::filesystem::create_directory(candidate, ec)) {
        path = candidate;
        return;
      }
    }
    throw std::runtime_error("could not create a scratch directory");
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }

  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace pureg::test
