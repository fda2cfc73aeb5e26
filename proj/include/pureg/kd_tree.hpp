#pragma once

#include <Eigen/Dense>
#include <vector>

namespace pureg {

// Exact k-d tree over a fixed set of points (rows of an n x d matrix).
// All queries are deterministic: distance ties are broken by ascending
// point index, and radius queries return indices in ascending order.
class KdTree {
 public:
  KdTree() = default;
  explicit KdTree(Eigen::MatrixXd points);

  int size() const { return static_cast<int>(points_.rows()); }
  int dim() const { return static_cast<int>(points_.cols()); }
  const Eigen::MatrixXd& points() const { return points_; }

  // Indices of the k nearest points ordered by (distance, index).
  // Throws std::invalid_argument if k < 1 or k > size().
  std::vector<int> nearest(const Eigen::VectorXd& query, int k) const;

  // Indices of every point with ||x_i - query|| <= radius, ascending.
  // Membership is tested on the square-rooted distance so it agrees with
  // radii that were themselves computed as norms.
  std::vector<int> within_radius(const Eigen::VectorXd& query, double radius) const;

 private:
  struct Node {
    int left = -1;
    int right = -1;
    int axis = -1;
    double split = 0.0;
    int begin = 0;  // leaf range into order_
    int end = 0;
  };

  int build(int begin, int end);
  void check_query(const Eigen::VectorXd& query) const;

  Eigen::MatrixXd points_;
  std::vector<int> order_;
  std::vector<Node> nodes_;
  int root_ = -1;

  static constexpr int kLeafSize = 16;
};

}  // namespace pureg
