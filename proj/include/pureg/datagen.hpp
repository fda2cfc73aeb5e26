#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>

#include "pureg/point_cloud.hpp"

namespace pureg {

// A point cloud plus, when the generator knows it, the analytic gradient of
// the generating function at every point (row i matches point i).
struct Dataset {
  PointCloud cloud;
  std::optional<Eigen::MatrixXd> gradients;
};

// --- 2D benchmark surface on [-6, 30]^2 ---------------------------------
//
// A product of a triple-plateau logistic ramp in x1 and a smooth oscillation:
//   z1(x1) = s(x1) (1 + 9 s(x1 - 12)) (1 + 10 s(x1 - 24)),  s(t) = 1/(1+e^-t)
//   z2(x1, x2) = sin(x2) + cos(x1)
//   f(x1, x2) = z1 * z2
// Steepness varies by an order of magnitude across the domain, which is what
// makes a single global bandwidth a bad compromise.
double synth2d(double x1, double x2);
Eigen::Vector2d synth2d_grad(double x1, double x2);

struct Synth2dData {
  Dataset train;  // n uniform points; responses get noise when noise_sigma > 0
  Dataset test;   // 181 x 181 grid with 0.2 spacing, always noiseless
};
// Deterministic in (n_train, seed, noise_sigma). Gradient rows are always
// the analytic gradients of the clean surface.
Synth2dData gen2d(int n_train, std::uint64_t seed, double noise_sigma = 0.0);

// --- Cosine bells on the unit sphere -------------------------------------

// Near-uniform spherical Fibonacci lattice, rotated by a seeded random
// rotation so the lattice's symmetry axis does not align across seeds.
Eigen::MatrixXd sphere_points(int n, std::uint64_t seed);

// Default bell centers: longitude 150 and 210 degrees on the equator.
Eigen::Vector3d bell_center_a();
Eigen::Vector3d bell_center_b();

// Two cosine bells of geodesic radius 1/2 plus a floor:
//   q(x) = 0.1 + 0.9 (q1 + q2),  q_j = (1 + cos(2 pi theta_j)) / 2 for
//   theta_j = arccos(x . p_j) < 1/2, else 0.
// Throws DataError when x is not on the unit sphere (1e-9 tolerance).
double cosine_bells(const Eigen::Vector3d& x, const Eigen::Vector3d& p1,
                    const Eigen::Vector3d& p2);

// Ambient-space gradient of cosine_bells; the theta -> 0 limit is handled
// analytically so bell centers are fine.
Eigen::Vector3d cosine_bells_grad(const Eigen::Vector3d& x, const Eigen::Vector3d& p1,
                                  const Eigen::Vector3d& p2);

// Thins a cloud so sampling density rises toward the two bell centers: point
// i survives with probability 1 - (d1/max d1)(d2/max d2), where d_j is the
// chord distance to center j. Returns surviving row indices, ascending.
std::vector<int> density_sample(const Eigen::MatrixXd& points, const Eigen::Vector3d& c1,
                                const Eigen::Vector3d& c2, std::uint64_t seed);

struct SphereData {
  Dataset train;
  Dataset test;        // every lattice point not used for training
  double target_max;   // max of the bell sum over the whole lattice
};
// Lattice of n points; training rows are a seeded shuffle of the (optionally
// density-thinned) lattice capped at n_train (n_train <= 0 keeps all
// eligible rows). The response is target_max - q(x), so the surface has
// its global maximum where the data is thinnest. Test rows are the
// complement of the training rows.
SphereData gen_sphere(int n, std::uint64_t seed, bool density_biased, int n_train);

}  // namespace pureg
