#include "pureg/metrics.hpp"

#include <cmath>

#include "pureg/errors.hpp"

namespace pureg {

ErrorReport error_report(const Eigen::VectorXd& truth, const Eigen::VectorXd& predictions) {
  if (truth.size() == 0) throw DataError("error report: no values");
  if (truth.size() != predictions.size()) {
    throw DataError("error report: " + std::to_string(truth.size()) + " truth values vs " +
                    std::to_string(predictions.size()) + " predictions");
  }

  ErrorReport report;
  double squared_sum = 0.0;
  double rel_sum = 0.0;
  for (Eigen::Index i = 0; i < truth.size(); ++i) {
    double diff = predictions(i) - truth(i);
    squared_sum += diff * diff;
    if (std::abs(truth(i)) > 1e-12) {
      double rel = std::abs(diff) / std::abs(truth(i));
      rel_sum += rel;
      report.max_relative_error = std::max(report.max_relative_error, rel);
      ++report.n_evaluated;
    } else {
      ++report.n_skipped_zero_truth;
    }
  }
  report.rmse = std::sqrt(squared_sum / static_cast<double>(truth.size()));
  if (report.n_evaluated > 0) {
    report.mean_relative_error = rel_sum / report.n_evaluated;
  }
  return report;
}

}  // namespace pureg
