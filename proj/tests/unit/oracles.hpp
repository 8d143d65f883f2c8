// Reference computations for the unit tests. Nothing here calls the library's
// projections or residuals; every quantity is rebuilt from its definition.
#ifndef CONTACTBENCH_TESTS_ORACLES_HPP
#define CONTACTBENCH_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include <Eigen/Core>

namespace oracle {

using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;

constexpr double kPi = 3.14159265358979323846;

/// Minimizes f over (a, b, c) in [lo, hi] by a coarse grid followed by
/// compass search with a shrinking step.
inline Vec3 grid_minimize(const std::function<double(const Vec3&)>& f, const Vec3& lo,
                          const Vec3& hi, int grid = 24) {
  Vec3 best = lo;
  double fbest = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= grid; ++i) {
    for (int j = 0; j <= grid; ++j) {
      for (int k = 0; k <= grid; ++k) {
        const Vec3 p = lo + (hi - lo).cwiseProduct(Vec3(i, j, k) / grid);
        const double v = f(p);
        if (v < fbest) {
          fbest = v;
          best = p;
        }
      }
    }
  }
  Vec3 step = (hi - lo) / grid;
  while (step.maxCoeff() > 1e-13) {
    bool moved = false;
    for (int d = 0; d < 3; ++d) {
      for (int s : {-1, 1}) {
        Vec3 p = best;
        p(d) = std::clamp(p(d) + s * step(d), lo(d), hi(d));
        const double v = f(p);
        if (v < fbest) {
          fbest = v;
          best = p;
          moved = true;
        }
      }
    }
    if (!moved) step *= 0.5;
  }
  return best;
}

/// Nearest point to x on the ray through (1, mu cos t, mu sin t).
inline Vec3 ray_point(double mu, double t, const Vec3& x) {
  const Vec3 d = Vec3(1.0, mu * std::cos(t), mu * std::sin(t)).normalized();
  return std::max(0.0, x.dot(d)) * d;
}

/// Euclidean projection onto the Coulomb cone. Outside the cone the nearest
/// point lies on one of the boundary rays; the ray angle is found by a dense
/// scan and golden-section refinement.
inline Vec3 search_project_cone(double mu, const Vec3& x) {
  if (x(0) >= 0.0 && x.tail<2>().norm() <= mu * x(0)) return x;
  if (mu == 0.0) return Vec3(std::max(0.0, x(0)), 0.0, 0.0);
  auto f = [&](double t) { return (ray_point(mu, t, x) - x).norm(); };
  constexpr int kSamples = 4096;
  double best_t = 0.0, best = f(0.0);
  for (int k = 1; k < kSamples; ++k) {
    const double t = 2.0 * kPi * k / kSamples;
    if (f(t) < best) {
      best = f(t);
      best_t = t;
    }
  }
  const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = best_t - 2.0 * kPi / kSamples, b = best_t + 2.0 * kPi / kSamples;
  while (b - a > 1e-14) {
    const double c = b - golden * (b - a), d = a + golden * (b - a);
    if (f(c) < f(d)) {
      b = d;
    } else {
      a = c;
    }
  }
  return ray_point(mu, 0.5 * (a + b), x);
}

inline double search_cone_distance(double mu, const Vec3& x) {
  return (search_project_cone(mu, x) - x).norm();
}

/// Distance to the dual cone {y_N >= 0, mu |y_T| <= y_N} by the same search.
inline double search_dual_distance(double mu, const Vec3& y) {
  if (mu == 0.0) return std::max(0.0, -y(0));
  return search_cone_distance(1.0 / mu, y);
}

/// Nearest point of the disk of radius `radius` to t by polar search.
inline Vec2 search_disk(double radius, const Vec2& t) {
  const Vec3 p = grid_minimize(
      [&](const Vec3& q) {
        return (Vec2(q(0) * radius * std::cos(q(1)), q(0) * radius * std::sin(q(1))) - t)
            .squaredNorm();
      },
      Vec3(0.0, -kPi, 0.0), Vec3(1.0, kPi, 0.0));
  return Vec2(p(0) * radius * std::cos(p(1)), p(0) * radius * std::sin(p(1)));
}

/// Nearest point of the square [-h, h]^2 to t by grid search.
inline Vec2 search_square(double h, const Vec2& t) {
  const Vec3 p = grid_minimize(
      [&](const Vec3& q) { return (Vec2(q(0), q(1)) - t).squaredNorm(); }, Vec3(-h, -h, 0.0),
      Vec3(h, h, 0.0));
  return Vec2(p(0), p(1));
}

/// Violation of the disjunctive Coulomb law at lam for c = G lam + g: the
/// smallest violation among take-off, sticking and sliding.
inline double coulomb_violation(const Eigen::Matrix3d& G, const Vec3& g, double mu,
                                const Vec3& lam) {
  const Vec3 c = G * lam + g;
  const Vec2 lt = lam.tail<2>();
  const Vec2 ct = c.tail<2>();
  const double takeoff = std::max(lam.norm(), std::max(0.0, -c(0)));
  const double sticking =
      std::max({c.norm(), std::max(0.0, -lam(0)), std::max(0.0, lt.norm() - mu * lam(0))});
  double sliding = std::numeric_limits<double>::infinity();
  if (mu == 0.0) {
    // Frictionless contact: c_T is unconstrained.
    sliding = std::max({std::abs(c(0)), lt.norm(), std::max(0.0, -lam(0))});
  } else if (lt.norm() > 0.0) {
    const Vec2 dir = lt / lt.norm();
    const double along = ct.dot(dir);  // must be <= 0: slip opposes friction
    const double across = std::abs(ct(0) * dir(1) - ct(1) * dir(0));
    sliding = std::max({std::abs(c(0)), std::abs(lt.norm() - mu * lam(0)), std::max(0.0, along),
                        across, std::max(0.0, -lam(0))});
  }
  return std::min({takeoff, sticking, sliding});
}

/// Random SPD 3x3 as A'A + 0.1 I with entries in [-2, 2].
inline Eigen::Matrix3d random_spd(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  Eigen::Matrix3d A;
  for (int i = 0; i < 9; ++i) A(i) = u(rng);
  return A.transpose() * A + 0.1 * Eigen::Matrix3d::Identity();
}

inline Vec3 random_vec(std::mt19937_64& rng, double scale = 2.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return Vec3(u(rng), u(rng), u(rng));
}

/// Angle between two 2-vectors, radians.
inline double angle(const Vec2& a, const Vec2& b) {
  return std::atan2(std::abs(a(0) * b(1) - a(1) * b(0)), a.dot(b));
}

}  // namespace oracle

#endif
