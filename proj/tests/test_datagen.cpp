#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "pureg/datagen.hpp"
#include "pureg/errors.hpp"
#include "pureg/rng.hpp"
#include "support.hpp"

using namespace pureg;
using pureg::test::fd_gradient;

namespace {

constexpr double kPi = std::numbers::pi;

// Independent rewrite of the bell formula in ambient coordinates, used as a
// finite-difference oracle for the analytic gradient.
double bells_ambient(const Eigen::Vector3d& x, const Eigen::Vector3d& p1,
                     const Eigen::Vector3d& p2) {
  auto bump = [](double t) {
    double theta = std::acos(std::min(1.0, std::max(-1.0, t)));
    if (theta >= 0.5) return 0.0;
    return (1.0 + std::cos(2.0 * kPi * theta)) / 2.0;
  };
  return 0.1 + 0.9 * (bump(x.dot(p1)) + bump(x.dot(p2)));
}

}  // namespace

TEST_SUITE("datagen") {

TEST_CASE("synth2d hand values") {
  // s(0) (1 + 9 s(-12)) (1 + 10 s(-24)) with z2 = sin 0 + cos 0 = 1
  CHECK(synth2d(0.0, 0.0) == doctest::Approx(0.500027648974477).epsilon(1e-12));

  // z2 vanishes when sin(x2) = -cos(x1)
  CHECK(std::abs(synth2d(0.0, -kPi / 2.0)) <= 1e-12);

  // the plateaus multiply up: at x1 = 30 the three logistics reach
  // s(30) (1 + 9 s(18)) (1 + 10 s(6)) = 109.7527..., just shy of the
  // saturation limit 1 * 10 * 11
  double z1_high = synth2d(30.0, kPi / 2.0) / (std::sin(kPi / 2.0) + std::cos(30.0));
  CHECK(z1_high == doctest::Approx(109.75273617994755).epsilon(1e-9));
}

TEST_CASE("synth2d gradient matches finite differences") {
  Rng g(3);
  for (int trial = 0; trial < 100; ++trial) {
    double x1 = uniform(g, -6, 30);
    double x2 = uniform(g, -6, 30);
    Eigen::Vector2d analytic = synth2d_grad(x1, x2);
    Eigen::VectorXd q(2);
    q << x1, x2;
    Eigen::VectorXd numeric = fd_gradient(
        [](const Eigen::VectorXd& v) { return synth2d(v(0), v(1)); }, q, 1e-5);
    CHECK((analytic - numeric).norm() <= 1e-6 * (1.0 + analytic.norm()));
  }
}

TEST_CASE("gen2d shapes and grid layout") {
  auto data = gen2d(500, 42);
  CHECK(data.train.cloud.n() == 500);
  CHECK(data.train.cloud.dim() == 2);
  REQUIRE(data.test.cloud.n() == 32761);  // 181 x 181 at 0.2 spacing

  CHECK(data.test.cloud.points.row(0)(0) == -6.0);
  CHECK(data.test.cloud.points.row(0)(1) == -6.0);
  CHECK(data.test.cloud.points.row(32760)(0) == doctest::Approx(30.0).epsilon(1e-12));
  CHECK(data.test.cloud.points.row(32760)(1) == doctest::Approx(30.0).epsilon(1e-12));
  // consecutive grid rows step x2 by 0.2
  CHECK(data.test.cloud.points(1, 1) - data.test.cloud.points(0, 1) ==
        doctest::Approx(0.2).epsilon(1e-12));

  // train points stay in the box, responses are the clean surface
  for (int i = 0; i < 500; ++i) {
    double x1 = data.train.cloud.points(i, 0);
    double x2 = data.train.cloud.points(i, 1);
    CHECK(x1 >= -6.0);
    CHECK(x1 < 30.0);
    CHECK(x2 >= -6.0);
    CHECK(x2 < 30.0);
    CHECK(data.train.cloud.responses(i) == synth2d(x1, x2));
  }

  REQUIRE(data.train.gradients.has_value());
  REQUIRE(data.test.gradients.has_value());
  for (int i : {0, 123, 499}) {
    Eigen::Vector2d expect =
        synth2d_grad(data.train.cloud.points(i, 0), data.train.cloud.points(i, 1));
    CHECK((data.train.gradients->row(i).transpose() - expect).norm() == 0.0);
  }
}

TEST_CASE("gen2d determinism and noise") {
  auto a = gen2d(200, 7);
  auto b = gen2d(200, 7);
  CHECK((a.train.cloud.points - b.train.cloud.points).norm() == 0.0);
  CHECK((a.train.cloud.responses - b.train.cloud.responses).norm() == 0.0);

  auto c = gen2d(200, 8);
  CHECK((a.train.cloud.points - c.train.cloud.points).norm() != 0.0);

  auto noisy = gen2d(200, 7, 0.05);
  // same seed, same points; only the responses move
  CHECK((noisy.train.cloud.points - a.train.cloud.points).norm() == 0.0);
  int moved = 0;
  for (int i = 0; i < 200; ++i) {
    double clean = synth2d(noisy.train.cloud.points(i, 0), noisy.train.cloud.points(i, 1));
    if (noisy.train.cloud.responses(i) != clean) ++moved;
  }
  CHECK(moved == 200);
  // gradients and the grid stay noiseless
  CHECK((*noisy.train.gradients - *a.train.gradients).norm() == 0.0);
  CHECK((noisy.test.cloud.responses - a.test.cloud.responses).norm() == 0.0);

  CHECK_THROWS_AS(gen2d(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(gen2d(10, 1, -0.1), std::invalid_argument);
}

TEST_CASE("sphere_points are unit and seeded") {
  Eigen::MatrixXd pts = sphere_points(3000, 11);
  REQUIRE(pts.rows() == 3000);
  REQUIRE(pts.cols() == 3);
  for (int i = 0; i < 3000; ++i) {
    CHECK(std::abs(pts.row(i).norm() - 1.0) <= 1e-12);
  }

  Eigen::MatrixXd again = sphere_points(3000, 11);
  CHECK((pts - again).norm() == 0.0);
  Eigen::MatrixXd other = sphere_points(3000, 12);
  CHECK((pts - other).norm() != 0.0);

  CHECK_THROWS_AS(sphere_points(0, 1), std::invalid_argument);
}

TEST_CASE("bell centers sit on the equator 60 degrees apart") {
  Eigen::Vector3d a = bell_center_a();
  Eigen::Vector3d b = bell_center_b();
  CHECK(std::abs(a.norm() - 1.0) <= 1e-15);
  CHECK(std::abs(b.norm() - 1.0) <= 1e-15);
  CHECK(a(2) == 0.0);
  CHECK(b(2) == 0.0);
  CHECK(a.dot(b) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("cosine_bells hand values") {
  Eigen::Vector3d a = bell_center_a();
  Eigen::Vector3d b = bell_center_b();

  // at a bell center the bump peaks; the other bell is over a radian away
  CHECK(cosine_bells(a, a, b) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cosine_bells(b, a, b) == doctest::Approx(1.0).epsilon(1e-12));

  // the north pole is pi/2 from both centers, outside both bells
  Eigen::Vector3d pole(0, 0, 1);
  CHECK(cosine_bells(pole, a, b) == 0.1);

  // a quarter radian up the meridian: q1 = (1 + cos(pi/2))/2 = 1/2
  Eigen::Vector3d quarter = std::cos(0.25) * a + std::sin(0.25) * pole;
  CHECK(cosine_bells(quarter, a, b) == doctest::Approx(0.55).epsilon(1e-12));

  Eigen::Vector3d off_sphere(0.5, 0.5, 0.5);
  CHECK_THROWS_AS(cosine_bells(off_sphere, a, b), DataError);

  // range invariant over the lattice
  Eigen::MatrixXd pts = sphere_points(2000, 5);
  for (int i = 0; i < 2000; ++i) {
    double q = cosine_bells(pts.row(i).transpose(), a, b);
    CHECK(q >= 0.1);
    CHECK(q <= 1.9);
  }
}

TEST_CASE("cosine_bells is C1 across the bell edge") {
  Eigen::Vector3d a = bell_center_a();
  Eigen::Vector3d pole(0, 0, 1);
  auto along = [&](double t) {
    Eigen::Vector3d x = std::cos(t) * a + std::sin(t) * pole;
    return cosine_bells(x, a, bell_center_b());
  };
  // geodesic parameterization: theta equals t exactly on this arc
  const double eps = 1e-6;
  double left = (along(0.5) - along(0.5 - eps)) / eps;
  double right = (along(0.5 + eps) - along(0.5)) / eps;
  CHECK(std::abs(left - right) <= 1e-4);
  CHECK(std::abs(left) <= 1e-4);   // the bump flattens out at its rim
  CHECK(along(0.5 + eps) == 0.1);  // identically the floor outside
}

TEST_CASE("cosine_bells_grad matches an ambient finite-difference oracle") {
  Eigen::Vector3d a = bell_center_a();
  Eigen::Vector3d b = bell_center_b();
  Rng g(13);
  int tested = 0;
  while (tested < 60) {
    Eigen::Vector3d x(normal(g), normal(g), normal(g));
    x.normalize();
    double t1 = std::acos(std::clamp(x.dot(a), -1.0, 1.0));
    double t2 = std::acos(std::clamp(x.dot(b), -1.0, 1.0));
    // keep clear of the rims, where one-sided FD would smear the kink
    if (std::abs(t1 - 0.5) < 1e-3 || std::abs(t2 - 0.5) < 1e-3) continue;
    ++tested;

    Eigen::VectorXd q = x;
    Eigen::VectorXd numeric = fd_gradient(
        [&](const Eigen::VectorXd& v) { return bells_ambient(v, a, b); }, q, 1e-7);
    Eigen::Vector3d analytic = cosine_bells_grad(x, a, b);
    CHECK((analytic - numeric).norm() <= 1e-5 * (1.0 + analytic.norm()));
  }

  // near the center the sin(theta) form must stay stable
  Eigen::Vector3d pole(0, 0, 1);
  Eigen::Vector3d near_center = std::cos(1e-3) * a + std::sin(1e-3) * pole;
  Eigen::VectorXd numeric = fd_gradient(
      [&](const Eigen::VectorXd& v) { return bells_ambient(v, a, b); }, near_center, 1e-7);
  Eigen::Vector3d analytic = cosine_bells_grad(near_center, a, b);
  CHECK((analytic - numeric).norm() <= 1e-5 * (1.0 + analytic.norm()));

  // exactly at the center, the limiting coefficient 2 pi^2 applies
  Eigen::Vector3d at_center = cosine_bells_grad(a, a, b);
  CHECK((at_center - 0.9 * 2.0 * kPi * kPi * a).norm() <= 1e-6);
}

TEST_CASE("density_sample keep probabilities") {
  Eigen::Vector3d a = bell_center_a();
  Eigen::Vector3d b = bell_center_b();
  const int copies = 100000;

  // 1e5 copies of the north pole plus the two antipodes that pin the maxima:
  // d1 = d2 = sqrt(2), r1 = r2 = 2, keep probability 1 - 1/2 = 1/2
  Eigen::MatrixXd pts(copies + 2, 3);
  for (int i = 0; i < copies; ++i) pts.row(i) << 0, 0, 1;
  pts.row(copies) = -a.transpose();
  pts.row(copies + 1) = -b.transpose();

  std::vector<int> kept = density_sample(pts, a, b, 99);
  int kept_copies = 0;
  for (int idx : kept) {
    if (idx < copies) ++kept_copies;
  }
  // binomial(1e5, 0.5): 3 standard errors is ~474
  CHECK(std::abs(kept_copies - copies / 2) <= 475);

  // a point at a center is always kept (first factor zero)
  Eigen::MatrixXd with_center(copies + 2, 3);
  for (int i = 0; i < copies; ++i) with_center.row(i) = a.transpose();
  with_center.row(copies) = -a.transpose();
  with_center.row(copies + 1) = -b.transpose();
  std::vector<int> kept_center = density_sample(with_center, a, b, 7);
  int center_copies = 0;
  for (int idx : kept_center) {
    if (idx < copies) ++center_copies;
  }
  CHECK(center_copies == copies);

  // ascending indices, deterministic
  CHECK(std::is_sorted(kept.begin(), kept.end()));
  CHECK(density_sample(pts, a, b, 99) == kept);
}

TEST_CASE("gen_sphere splits the lattice") {
  SphereData data = gen_sphere(2000, 3, false, 500);
  CHECK(data.train.cloud.n() == 500);
  CHECK(data.test.cloud.n() == 1500);
  CHECK(data.train.cloud.dim() == 3);

  // responses are max(q) - q, so they are nonnegative and some lattice point
  // hits zero exactly
  double min_response = std::min(data.train.cloud.responses.minCoeff(),
                                 data.test.cloud.responses.minCoeff());
  CHECK(data.train.cloud.responses.minCoeff() >= 0.0);
  CHECK(data.test.cloud.responses.minCoeff() >= 0.0);
  CHECK(min_response == 0.0);
  CHECK(data.target_max > 0.1);
  CHECK(data.target_max <= 1.9);

  // responses and gradients agree with the generator formula
  Eigen::Vector3d a = bell_center_a();
  Eigen::Vector3d b = bell_center_b();
  for (int i : {0, 250, 499}) {
    Eigen::Vector3d x = data.train.cloud.points.row(i).transpose();
    CHECK(data.train.cloud.responses(i) ==
          doctest::Approx(data.target_max - cosine_bells(x, a, b)).epsilon(1e-15));
    REQUIRE(data.train.gradients.has_value());
    CHECK((data.train.gradients->row(i).transpose() + cosine_bells_grad(x, a, b)).norm() ==
          0.0);
  }

  SphereData again = gen_sphere(2000, 3, false, 500);
  CHECK((data.train.cloud.points - again.train.cloud.points).norm() == 0.0);
  CHECK((data.test.cloud.responses - again.test.cloud.responses).norm() == 0.0);
}

TEST_CASE("gen_sphere density bias keeps the bell neighborhoods dense") {
  SphereData data = gen_sphere(4000, 5, true, -1);
  // thinning dropped something, and test still holds the complement
  CHECK(data.train.cloud.n() < 4000);
  CHECK(data.train.cloud.n() + data.test.cloud.n() == 4000);

  // keep probability falls with the distance product, so the training rows
  // should sit closer to the centers on average than the dropped rows
  Eigen::Vector3d a = bell_center_a();
  Eigen::Vector3d b = bell_center_b();
  auto mean_product = [&](const Eigen::MatrixXd& pts) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < pts.rows(); ++i) {
      Eigen::Vector3d x = pts.row(i).transpose();
      sum += (x - a).norm() * (x - b).norm();
    }
    return sum / static_cast<double>(pts.rows());
  };
  CHECK(mean_product(data.train.cloud.points) < mean_product(data.test.cloud.points));
}

TEST_CASE("gen_sphere argument and degenerate-split errors") {
  CHECK_THROWS_AS(gen_sphere(1, 1, false, 0), std::invalid_argument);
  // taking every lattice point for training leaves nothing to test on
  CHECK_THROWS_AS(gen_sphere(100, 1, false, 0), DataError);
  CHECK_THROWS_AS(gen_sphere(100, 1, false, 100), DataError);
}

}  // TEST_SUITE
