#pragma once

#include <Eigen/Dense>

namespace pureg {

// Accuracy summary of predictions against ground truth. Relative errors are
// only accumulated where |truth| > 1e-12; the near-zero entries are counted
// instead of dividing by them.
struct ErrorReport {
  double rmse = 0.0;
  double max_relative_error = 0.0;
  double mean_relative_error = 0.0;
  int n_evaluated = 0;          // entries that went into the relative errors
  int n_skipped_zero_truth = 0;
};

// Throws DataError for empty input or mismatched lengths.
ErrorReport error_report(const Eigen::VectorXd& truth, const Eigen::VectorXd& predictions);

}  // namespace pureg
