#include "pureg/monomial_basis.hpp"

#include <stdexcept>

namespace pureg {

namespace {

// Integer power; ipow(x, 0) == 1 for every x including 0.
double ipow(double x, int e) {
  double out = 1.0;
  for (int i = 0; i < e; ++i) out *= x;
  return out;
}

void enumerate(int remaining, int position, Eigen::VectorXi& current,
               std::vector<Eigen::VectorXi>& out) {
  if (position == current.size() - 1) {
    current(position) = remaining;
    out.push_back(current);
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    current(position) = e;
    enumerate(remaining - e, position + 1, current, out);
  }
}

}  // namespace

MonomialBasis::MonomialBasis(int dimension, int degree)
    : dimension_(dimension), degree_(degree) {
  if (dimension < 1) throw std::invalid_argument("MonomialBasis: dimension must be >= 1");
  if (degree < 0) throw std::invalid_argument("MonomialBasis: degree must be >= 0");
  Eigen::VectorXi current(dimension);
  for (int total = 0; total <= degree; ++total) enumerate(total, 0, current, exponents_);
}

Eigen::VectorXd MonomialBasis::evaluate(const Eigen::VectorXd& q) const {
  Eigen::VectorXd out(size());
  for (int i = 0; i < size(); ++i) {
    const Eigen::VectorXi& e = exponents_[static_cast<std::size_t>(i)];
    double v = 1.0;
    for (int k = 0; k < dimension_; ++k) v *= ipow(q(k), e(k));
    out(i) = v;
  }
  return out;
}

Eigen::MatrixXd MonomialBasis::gradient(const Eigen::VectorXd& q) const {
  Eigen::MatrixXd out(size(), dimension_);
  for (int i = 0; i < size(); ++i) {
    const Eigen::VectorXi& e = exponents_[static_cast<std::size_t>(i)];
    for (int k = 0; k < dimension_; ++k) {
      if (e(k) == 0) {
        out(i, k) = 0.0;
        continue;
      }
      double v = e(k) * ipow(q(k), e(k) - 1);
      for (int j = 0; j < dimension_; ++j) {
        if (j != k) v *= ipow(q(j), e(j));
      }
      out(i, k) = v;
    }
  }
  return out;
}

Eigen::MatrixXd MonomialBasis::evaluate_rows(const Eigen::MatrixXd& X) const {
  Eigen::MatrixXd out(X.rows(), size());
  for (Eigen::Index r = 0; r < X.rows(); ++r) {
    out.row(r) = evaluate(X.row(r).transpose()).transpose();
  }
  return out;
}

}  // namespace pureg
