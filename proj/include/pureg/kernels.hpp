#pragma once

#include <Eigen/Dense>

namespace pureg {

// Gaussian kernel K(x, p) = exp(-||x - p||^2 / sigma^2).
double gaussian(const Eigen::VectorXd& x, const Eigen::VectorXd& p, double sigma);

// Gradient of K(x, q) with respect to the query q: K * 2 (x - q) / sigma^2.
Eigen::VectorXd gaussian_grad_query(const Eigen::VectorXd& x, const Eigen::VectorXd& q,
                                    double sigma);

// Symmetric kernel matrix K_ij = exp(-||x_i - x_j||^2 / sigma^2) over rows of X.
// Built from the upper triangle and mirrored, so it is exactly symmetric.
Eigen::MatrixXd gaussian_kernel_matrix(const Eigen::MatrixXd& X, double sigma);

// Wendland C2 bump on [0, r): (1 - v/r)^4 (1 + 4 v/r), identically 0 for v >= r.
// Used as the partition-of-unity weight; compact support is exact, not
// approximate, so points outside a ball contribute a true zero.
double wendland(double v, double r);

// d/dv of the Wendland bump: -(20/r) (v/r) (1 - v/r)^3, 0 for v >= r.
double wendland_deriv(double v, double r);

// Mean Euclidean distance over all ordered pairs of distinct rows. For more
// than 2000 rows the mean is estimated from 2000^2 sampled pairs with a fixed
// internal seed, so the result is still deterministic. Throws
// std::invalid_argument for fewer than 2 rows and DataError when every
// pairwise distance is 0 (a zero bandwidth would be unusable).
double mean_pairwise_distance(const Eigen::MatrixXd& X);

}  // namespace pureg
