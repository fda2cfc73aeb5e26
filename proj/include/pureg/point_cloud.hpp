#pragma once

#include <Eigen/Dense>
#include <vector>

namespace pureg {

// Training data: one point per row plus the observed response.
struct PointCloud {
  Eigen::MatrixXd points;     // n x d
  Eigen::VectorXd responses;  // n

  int n() const { return static_cast<int>(points.rows()); }
  int dim() const { return static_cast<int>(points.cols()); }

  // Throws DataError if empty, d < 1, sizes disagree, or values are not finite.
  void validate() const;

  // Row subset in the order given.
  PointCloud subset(const std::vector<int>& indices) const;
};

}  // namespace pureg
