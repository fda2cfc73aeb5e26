#pragma once

#include <Eigen/Dense>
#include <vector>

#include "pureg/kd_tree.hpp"
#include "pureg/point_cloud.hpp"

namespace pureg {

// A ball around a chosen training point. Members are every training index
// whose point lies in the closed ball, including points already covered by
// earlier regions.
struct Region {
  int id = -1;            // position in RegionCover::regions
  int center_index = -1;  // training index of the center
  Eigen::VectorXd center;
  double radius = 0.0;
  int level = 0;  // floor(log2(radius / r_min))
  std::vector<int> member_indices;  // ascending
};

// Regions with a similar radius share a level; each level carries a k-d tree
// over its centers so containment queries only search balls that could
// actually reach the query.
struct LevelGroup {
  int level = 0;
  double max_radius = 0.0;
  std::vector<int> region_ids;  // ascending
  KdTree center_tree;           // rows follow region_ids
};

struct RegionCover {
  std::vector<Region> regions;
  double r_min = 0.0;
  double r_max = 0.0;
  std::vector<LevelGroup> levels;

  // Ids of all regions whose closed ball contains q, ascending. Uses the
  // per-level trees: one radius-bounded query per level, then an exact
  // distance check against each candidate's own radius.
  std::vector<int> regions_containing(const Eigen::VectorXd& q) const;
};

// Greedy ball cover. Repeatedly takes the lowest-index uncovered point as a
// center, sets the radius to the distance to its h-th nearest training point
// (the center counts as its own first neighbor), and marks everything in the
// ball covered. A radius of 0 (h coincident points) is inflated to the
// smallest positive pairwise distance in the cloud, or 1.0 if there is none.
// h > n degrades to h = n. Throws std::invalid_argument for h < 1.
RegionCover build_cover(const PointCloud& cloud, int h);

// Recomputes r_min / r_max, region levels, and the per-level trees from the
// regions' centers and radii. build_cover calls this; model deserialization
// reuses it after restoring the regions.
void finalize_levels(RegionCover& cover);

// Brute-force k nearest rows of `points` to q, ordered by (distance, index).
// Reference oracle for KdTree::nearest; also handy for small one-off queries.
std::vector<int> knn(const Eigen::MatrixXd& points, const Eigen::VectorXd& q, int k);

}  // namespace pureg
