#include "pureg/point_cloud.hpp"

#include "pureg/errors.hpp"

namespace pureg {

void PointCloud::validate() const {
  if (points.rows() == 0) throw DataError("point cloud is empty");
  if (points.cols() < 1) throw DataError("point cloud has dimension 0");
  if (responses.size() != points.rows()) {
    throw DataError("point count (" + std::to_string(points.rows()) +
                    ") does not match response count (" +
                    std::to_string(responses.size()) + ")");
  }
  if (!points.allFinite()) throw DataError("point coordinates contain NaN or Inf");
  if (!responses.allFinite()) throw DataError("responses contain NaN or Inf");
}

PointCloud PointCloud::subset(const std::vector<int>& indices) const {
  PointCloud out;
  out.points.resize(static_cast<Eigen::Index>(indices.size()), points.cols());
  out.responses.resize(static_cast<Eigen::Index>(indices.size()));
  for (std::size_t i = 0; i < indices.size(); ++i) {
    out.points.row(static_cast<Eigen::Index>(i)) = points.row(indices[i]);
    out.responses(static_cast<Eigen::Index>(i)) = responses(indices[i]);
  }
  return out;
}

}  // namespace pureg
