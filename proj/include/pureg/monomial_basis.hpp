#pragma once

#include <Eigen/Dense>
#include <vector>

namespace pureg {

// All monomials in d variables of total degree <= degree, in graded
// lexicographic order: degree 0 first, and within each total degree the
// exponent of the first coordinate decreases. For d = 2, degree = 2:
//   1, x1, x2, x1^2, x1*x2, x2^2.
class MonomialBasis {
 public:
  MonomialBasis() = default;
  // Throws std::invalid_argument if dimension < 1 or degree < 0.
  MonomialBasis(int dimension, int degree);

  int dimension() const { return dimension_; }
  int degree() const { return degree_; }
  // Number of basis functions, binom(degree + dimension, dimension).
  int size() const { return static_cast<int>(exponents_.size()); }
  const std::vector<Eigen::VectorXi>& exponents() const { return exponents_; }

  // Values of every basis monomial at q (length size()).
  Eigen::VectorXd evaluate(const Eigen::VectorXd& q) const;

  // Jacobian: row i holds the gradient of monomial i at q (size() x d).
  Eigen::MatrixXd gradient(const Eigen::VectorXd& q) const;

  // Rows of X evaluated through the basis: out(i, j) = monomial_j(x_i).
  Eigen::MatrixXd evaluate_rows(const Eigen::MatrixXd& X) const;

 private:
  int dimension_ = 0;
  int degree_ = 0;
  std::vector<Eigen::VectorXi> exponents_;
};

}  // namespace pureg
