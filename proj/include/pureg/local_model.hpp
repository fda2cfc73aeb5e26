#pragma once

#include <Eigen/Dense>
#include <optional>

#include "pureg/monomial_basis.hpp"

namespace pureg {

enum class LocalModelKind { Krr, KrrPoly };

// One region's fitted regressor: a Gaussian kernel expansion over the
// region's training points, optionally augmented with a polynomial tail.
//
//   f(q) = sum_i alpha_i K(x_i, q) [+ sum_j lambda_j p_j(q - basis_shift)]
//
// The tail's monomials are evaluated in coordinates centered on the training
// points: far from the origin, raw monomials over a small ball are nearly
// collinear (x^2 is locally linear in x) and their huge column norms make
// the constrained solve truncate directions it actually needs. Shifting
// spans the same polynomial space, so reproduction and the P^T alpha = 0
// constraint are unchanged, but the system stays well conditioned. A model
// with zero kernel centers is legal (pure polynomial: only the lambda term
// is active).
struct LocalModel {
  LocalModelKind kind = LocalModelKind::Krr;
  Eigen::MatrixXd training_points;  // m x d kernel centers
  Eigen::VectorXd alpha;            // m kernel coefficients
  Eigen::VectorXd lambda;           // s polynomial coefficients (empty for Krr)
  Eigen::VectorXd basis_shift;      // mean of the training points (empty for Krr)
  double sigma = 1.0;
  double eta = 0.0;
  std::optional<MonomialBasis> basis;  // present iff kind == KrrPoly
};

// Ridge-regularized kernel interpolation: solves (K + eta I) alpha = y with a
// Cholesky factorization plus iterative refinement, which keeps the residual
// under 1e-8 * ||y|| even when a small eta leaves the system near-singular.
// Falls back to an SVD solve when the factorization itself fails.
// Throws std::invalid_argument for sigma <= 0 or eta <= 0, DataError for
// empty or non-finite inputs.
LocalModel fit_krr(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double sigma,
                   double eta);

// Kernel fit constrained to reproduce polynomials up to the given degree:
//
//   [ K + eta I  P ] [ alpha  ]   [ y ]
//   [ P^T        0 ] [ lambda ] = [ 0 ]
//
// with P_ij = p_j(x_i - mean(x)). Solved by SVD with singular values below
// svd_threshold * s_max treated as zero, so rank-deficient P (points on an
// algebraic surface where monomials coincide) picks the minimum-norm
// solution instead of failing. The returned alpha is projected onto the
// orthogonal complement of range(P), which enforces P^T alpha = 0 up to
// roundoff even in the rank-deficient case.
LocalModel fit_krr_poly(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double sigma,
                        double eta, int degree, double svd_threshold = 1e-10);

// Dispatch: degree absent -> fit_krr, otherwise fit_krr_poly. The KRR path
// returns bit-identical results to calling fit_krr directly.
LocalModel fit_local(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double sigma,
                     double eta, std::optional<int> degree,
                     double svd_threshold = 1e-10);

// Pure polynomial least-squares fit: a KrrPoly model with no kernel centers.
LocalModel fit_polynomial(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int degree,
                          double svd_threshold = 1e-10);

double eval_local(const LocalModel& model, const Eigen::VectorXd& q);

// Exact gradient of eval_local with respect to q.
Eigen::VectorXd grad_local(const LocalModel& model, const Eigen::VectorXd& q);

// Minimum-norm least-squares solve with relative singular value cutoff.
Eigen::VectorXd svd_solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                          double rel_threshold);

}  // namespace pureg
