#include "pureg/spatial_cover.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pureg/errors.hpp"

namespace pureg {

namespace {

// Smallest nonzero distance between any two points, or 0 if all coincide.
// Walks outward through each point's neighbor list, doubling k, so the usual
// case (immediate distinct neighbor) stays O(n log n).
double smallest_positive_pairwise_distance(const KdTree& tree) {
  const int n = tree.size();
  double best = 0.0;
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd q = tree.points().row(i).transpose();
    int k = 2;
    double found = 0.0;
    while (true) {
      if (k > n) k = n;
      std::vector<int> nbrs = tree.nearest(q, k);
      for (int idx : nbrs) {
        double dist = (tree.points().row(idx).transpose() - q).norm();
        if (dist > 0.0) {
          found = dist;
          break;
        }
      }
      if (found > 0.0 || k == n) break;
      k *= 2;
    }
    if (found > 0.0 && (best == 0.0 || found < best)) best = found;
  }
  return best;
}

}  // namespace

RegionCover build_cover(const PointCloud& cloud, int h) {
  cloud.validate();
  if (h < 1) throw std::invalid_argument("build_cover: h must be >= 1");
  const int n = cloud.n();
  if (h > n) h = n;

  KdTree tree(cloud.points);
  std::vector<bool> covered(static_cast<std::size_t>(n), false);
  double inflated_radius = -1.0;  // computed on first zero-radius region

  RegionCover cover;
  int next = 0;
  while (true) {
    while (next < n && covered[static_cast<std::size_t>(next)]) ++next;
    if (next == n) break;

    Region region;
    region.id = static_cast<int>(cover.regions.size());
    region.center_index = next;
    region.center = cloud.points.row(next).transpose();

    std::vector<int> nbrs = tree.nearest(region.center, h);
    region.radius = (cloud.points.row(nbrs.back()).transpose() - region.center).norm();
    if (region.radius == 0.0) {
      if (inflated_radius < 0.0) {
        inflated_radius = smallest_positive_pairwise_distance(tree);
        if (inflated_radius == 0.0) inflated_radius = 1.0;  // every point coincides
      }
      region.radius = inflated_radius;
    }

    region.member_indices = tree.within_radius(region.center, region.radius);
    for (int idx : region.member_indices) covered[static_cast<std::size_t>(idx)] = true;
    cover.regions.push_back(std::move(region));
  }

  finalize_levels(cover);
  return cover;
}

void finalize_levels(RegionCover& cover) {
  cover.levels.clear();
  if (cover.regions.empty()) {
    cover.r_min = cover.r_max = 0.0;
    return;
  }

  cover.r_min = cover.regions.front().radius;
  cover.r_max = cover.regions.front().radius;
  for (const Region& r : cover.regions) {
    cover.r_min = std::min(cover.r_min, r.radius);
    cover.r_max = std::max(cover.r_max, r.radius);
  }

  // ilogb gives an exact floor(log2(.)) of the quotient, so radii within a
  // level differ by strictly less than a factor of 2.
  int max_level = 0;
  for (Region& r : cover.regions) {
    r.level = std::ilogb(r.radius / cover.r_min);
    max_level = std::max(max_level, r.level);
  }

  std::vector<std::vector<int>> by_level(static_cast<std::size_t>(max_level + 1));
  for (const Region& r : cover.regions) {
    by_level[static_cast<std::size_t>(r.level)].push_back(r.id);
  }

  const Eigen::Index d = cover.regions.front().center.size();
  for (int lvl = 0; lvl <= max_level; ++lvl) {
    const std::vector<int>& ids = by_level[static_cast<std::size_t>(lvl)];
    if (ids.empty()) continue;
    LevelGroup group;
    group.level = lvl;
    group.region_ids = ids;
    Eigen::MatrixXd centers(static_cast<Eigen::Index>(ids.size()), d);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      const Region& r = cover.regions[static_cast<std::size_t>(ids[i])];
      centers.row(static_cast<Eigen::Index>(i)) = r.center.transpose();
      group.max_radius = std::max(group.max_radius, r.radius);
    }
    group.center_tree = KdTree(std::move(centers));
    cover.levels.push_back(std::move(group));
  }
}

std::vector<int> RegionCover::regions_containing(const Eigen::VectorXd& q) const {
  std::vector<int> result;
  for (const LevelGroup& group : levels) {
    std::vector<int> candidates = group.center_tree.within_radius(q, group.max_radius);
    for (int ci : candidates) {
      const Region& r = regions[static_cast<std::size_t>(
          group.region_ids[static_cast<std::size_t>(ci)])];
      if ((q - r.center).norm() <= r.radius) result.push_back(r.id);
    }
  }
  std::sort(result.begin(), result.end());
  return result;
}

std::vector<int> knn(const Eigen::MatrixXd& points, const Eigen::VectorXd& q, int k) {
  const int n = static_cast<int>(points.rows());
  if (k < 1 || k > n) {
    throw std::invalid_argument("knn: k = " + std::to_string(k) + " out of range for " +
                                std::to_string(n) + " points");
  }
  std::vector<std::pair<double, int>> entries;
  entries.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    entries.emplace_back((points.row(i).transpose() - q).squaredNorm(), i);
  }
  std::sort(entries.begin(), entries.end());
  std::vector<int> result;
  result.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) result.push_back(entries[static_cast<std::size_t>(i)].second);
  return result;
}

}  // namespace pureg
