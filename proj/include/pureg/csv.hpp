#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "pureg/point_cloud.hpp"

namespace pureg {

// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double v);

// Numeric table read from a comma-separated file. A single leading header
// row is detected automatically (any cell that is not a number); every other
// row must be fully numeric. Parse errors report the 1-based line number.
struct CsvTable {
  Eigen::MatrixXd values;
  bool had_header = false;
  std::vector<std::string> header;  // empty when had_header is false
};
CsvTable load_csv_table(const std::string& path);

// Training file layout: columns 1..d are features, the last column is the
// response. Throws DataError for fewer than 2 columns.
PointCloud load_csv(const std::string& path);

// Writes header (skipped when empty) and rows with format_double cells.
// The write is atomic: a temp file in the same directory is renamed over
// the target.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const Eigen::MatrixXd& values);

}  // namespace pureg
