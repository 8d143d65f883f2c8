#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "contactbench/cone.hpp"
#include "oracles.hpp"

namespace cb = contactbench;
using Eigen::Vector2d;
using Eigen::Vector3d;

namespace {

void expect_near(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double tol) {
  ASSERT_EQ(a.size(), b.size());
  EXPECT_LE((a - b).cwiseAbs().maxCoeff(), tol) << "got " << a.transpose() << " want "
                                                 << b.transpose();
}

}  // namespace

TEST(ConeContains, Examples) {
  const cb::FrictionCone k(0.5);
  EXPECT_TRUE(cb::cone_contains(k, Vector3d(1, 0.2, 0)));
  EXPECT_TRUE(cb::cone_contains(k, Vector3d(1, 0.5, 0)));
  EXPECT_FALSE(cb::cone_contains(k, Vector3d(1, 0.8, 0)));
}

TEST(ConeContains, BoundarySlackAndNegativeNormal) {
  const cb::FrictionCone k(0.5);
  EXPECT_TRUE(k.contains(Vector3d(1, 0.5 + 0.5e-12, 0)));
  EXPECT_FALSE(k.contains(Vector3d(1, 0.5 + 1e-9, 0)));
  EXPECT_FALSE(k.contains(Vector3d(-1e-6, 0, 0)));
  EXPECT_TRUE(cb::FrictionCone(0.0).contains(Vector3d(2, 0, 0)));
  EXPECT_FALSE(cb::FrictionCone(0.0).contains(Vector3d(2, 1e-6, 0)));
}

TEST(FrictionCone, RejectsInvalidMu) {
  EXPECT_THROW(cb::FrictionCone(-0.1), std::invalid_argument);
  EXPECT_THROW(cb::FrictionCone(std::nan("")), std::invalid_argument);
}

TEST(ProjectSoc, Examples) {
  const cb::FrictionCone k(0.5);
  expect_near(cb::project_soc(k, Vector3d(1, 0.2, 0)), Vector3d(1, 0.2, 0), 1e-15);
  expect_near(cb::project_soc(k, Vector3d(-2, 0.5, 0)), Vector3d(0, 0, 0), 1e-15);
  expect_near(cb::project_soc(k, Vector3d(1, 2, 0)), Vector3d(1.6, 0.8, 0), 1e-12);
}

TEST(ProjectSoc, ExamplesAgreeWithSearch) {
  for (const Vector3d& x : {Vector3d(1, 0.2, 0), Vector3d(-2, 0.5, 0), Vector3d(1, 2, 0)}) {
    expect_near(cb::project_soc(cb::FrictionCone(0.5), x), oracle::search_project_cone(0.5, x),
                1e-6);
  }
}

TEST(ProjectSoc, RandomPointsAgreeWithSearch) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> mu_dist(0.05, 2.0);
  for (int n = 0; n < 40; ++n) {
    const double mu = mu_dist(rng);
    const Vector3d x = oracle::random_vec(rng, 3.0);
    expect_near(cb::FrictionCone(mu).project(x), oracle::search_project_cone(mu, x), 1e-6);
  }
}

TEST(ProjectSoc, IdempotentNonexpansiveOptimal) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> mu_dist(0.0, 2.0);
  for (int n = 0; n < 2000; ++n) {
    const cb::FrictionCone k(n % 10 == 0 ? 0.0 : mu_dist(rng));
    const Vector3d x = oracle::random_vec(rng, 5.0);
    const Vector3d y = oracle::random_vec(rng, 5.0);
    const Vector3d px = k.project(x);
    const Vector3d py = k.project(y);
    EXPECT_TRUE(k.contains(px));
    expect_near(k.project(px), px, 1e-12);
    EXPECT_LE((px - py).norm(), (x - y).norm() + 1e-12);
    EXPECT_LE((x - px).dot(px), 1e-10);
  }
}

TEST(ProjectDual, RandomPointsAgreeWithSearch) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> mu_dist(0.1, 1.5);
  for (int n = 0; n < 30; ++n) {
    const double mu = mu_dist(rng);
    const Vector3d y = oracle::random_vec(rng, 3.0);
    EXPECT_NEAR(cb::FrictionCone(mu).dual_distance(y), oracle::search_dual_distance(mu, y), 1e-6);
  }
}

TEST(ProjectDual, FrictionlessIsHalfSpace) {
  const cb::FrictionCone k(0.0);
  expect_near(k.project_dual(Vector3d(-1, 3, -4)), Vector3d(0, 3, -4), 1e-15);
  expect_near(k.project_dual(Vector3d(2, 3, -4)), Vector3d(2, 3, -4), 1e-15);
}

TEST(ProjectHorizontal, Examples) {
  const cb::FrictionCone k(0.5);
  expect_near(cb::project_horizontal(k, 1, Vector2d(0.3, 0)), Vector2d(0.3, 0), 1e-15);
  expect_near(cb::project_horizontal(k, 1, Vector2d(2, 0)), Vector2d(0.5, 0), 1e-15);
  expect_near(cb::project_horizontal(k, 0, Vector2d(1, 1)), Vector2d(0, 0), 1e-15);
}

TEST(ProjectHorizontal, MatchesDiskSearchAndKeepsDirection) {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int n = 0; n < 40; ++n) {
    const cb::FrictionCone k(u(rng));
    const double lam_n = u(rng);
    const Vector3d r = oracle::random_vec(rng, 3.0);
    const Vector2d t = r.head<2>();
    const Vector2d p = k.project_horizontal(lam_n, t);
    expect_near(p, oracle::search_disk(k.mu() * lam_n, t), 1e-6);
    if (p.norm() > 1e-12) {
      EXPECT_LE(oracle::angle(p, t), 1e-12);
    }
  }
}

TEST(ClampPyramid, Examples) {
  const cb::FrictionCone k(0.5);
  expect_near(cb::clamp_pyramid(k, 1, Vector2d(2, 0)), Vector2d(0.5, 0), 1e-15);
  const Vector2d corner = cb::clamp_pyramid(k, 1, Vector2d(1.414, 1.414));
  expect_near(corner, Vector2d(0.5, 0.5), 1e-15);
  EXPECT_NEAR(corner.norm(), 0.70710678, 1e-8);
  expect_near(cb::clamp_pyramid(k, 1, Vector2d(0.1, -0.1)), Vector2d(0.1, -0.1), 1e-15);
}

TEST(ClampPyramid, MatchesSquareSearchWithinSqrt2OfDisk) {
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int n = 0; n < 200; ++n) {
    const cb::FrictionCone k(u(rng));
    const double lam_n = u(rng);
    const Vector3d r = oracle::random_vec(rng, 3.0);
    const Vector2d p = k.clamp_pyramid(lam_n, r.head<2>());
    const double h = k.mu() * lam_n;
    EXPECT_LE(p.cwiseAbs().maxCoeff(), h + 1e-15);
    EXPECT_LE(p.norm(), std::sqrt(2.0) * h + 1e-15);
    if (n < 40) expect_near(p, oracle::search_square(h, r.head<2>()), 1e-6);
  }
}

TEST(Pyramid, ProjectionAndDual) {
  const cb::FrictionCone k(0.5);
  EXPECT_TRUE(k.pyramid_contains(Vector3d(1, 0.5, -0.5)));
  EXPECT_FALSE(k.pyramid_contains(Vector3d(1, 0.6, 0)));
  std::mt19937_64 rng(16);
  for (int n = 0; n < 500; ++n) {
    const Vector3d x = oracle::random_vec(rng, 3.0);
    const Vector3d p = k.project_pyramid(x);
    EXPECT_TRUE(k.pyramid_contains(p));
    // Moreau decomposition: x = P_K(x) - P_K*(-x) with orthogonal parts.
    const Vector3d q = k.project_pyramid_dual(-x);
    expect_near(p - q, x, 1e-12);
    EXPECT_NEAR(p.dot(q), 0.0, 1e-12);
    EXPECT_GE(q(0) + 1e-12, 0.5 * q.tail<2>().lpNorm<1>());
  }
}

TEST(DeSaxce, Examples) {
  expect_near(cb::de_saxce_correction(Vector3d(0.6, -1.5, 0), 0.5), Vector3d(0.75, 0, 0), 1e-15);
  expect_near(cb::de_saxce_correction(Vector3d(1, 0, 0), 0.9), Vector3d(0, 0, 0), 1e-15);
  expect_near(cb::de_saxce_correction(Vector3d(0, 3, 4), 0.2), Vector3d(1, 0, 0), 1e-15);
  expect_near(cb::pyramid_de_saxce_correction(Vector3d(0, 3, -4), 0.2), Vector3d(1.4, 0, 0),
              1e-15);
}
