#include "contactbench/cone.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace contactbench {

namespace {

// Nearest feasible point among candidate face projections.
template <class Feasible>
Eigen::Vector3d nearest_feasible(const Eigen::Vector3d& x,
                                 const std::array<Eigen::Vector3d, 5>& candidates,
                                 int count, Feasible feasible) {
  Eigen::Vector3d best = Eigen::Vector3d::Zero();
  double best_dist = (x - best).squaredNorm();
  for (int k = 0; k < count; ++k) {
    if (!feasible(candidates[k])) continue;
    const double d = (x - candidates[k]).squaredNorm();
    if (d < best_dist) {
      best_dist = d;
      best = candidates[k];
    }
  }
  return best;
}

}  // namespace

FrictionCone::FrictionCone(double mu) : mu_(mu) {
  if (!(mu >= 0.0) || !std::isfinite(mu)) {
    throw std::invalid_argument("friction coefficient must be finite and >= 0");
  }
}

bool FrictionCone::contains(const Eigen::Vector3d& lam) const {
  return lam(0) >= -kConeTolerance &&
         lam.tail<2>().norm() <= mu_ * lam(0) + kConeTolerance;
}

Eigen::Vector3d FrictionCone::project(const Eigen::Vector3d& x) const {
  const double n = x(0);
  const double r = x.tail<2>().norm();
  if (n >= 0.0 && r <= mu_ * n) return x;
  if (mu_ * r <= -n) return Eigen::Vector3d::Zero();
  // r > 0 here: the boundary generator is (1, mu t/r).
  const double s = (n + mu_ * r) / (1.0 + mu_ * mu_);
  Eigen::Vector3d out;
  out(0) = s;
  out.tail<2>() = (mu_ * s / r) * x.tail<2>();
  return out;
}

Eigen::Vector3d FrictionCone::project_dual(const Eigen::Vector3d& y) const {
  // K* = {mu |y_T| <= y_N}, written without dividing by mu.
  const double n = y(0);
  const double r = y.tail<2>().norm();
  if (mu_ * r <= n) return y;
  if (r <= -mu_ * n) return Eigen::Vector3d::Zero();
  const double s = (mu_ * n + r) / (1.0 + mu_ * mu_);
  Eigen::Vector3d out;
  out(0) = mu_ * s;
  out.tail<2>() = (s / r) * y.tail<2>();
  return out;
}

Eigen::Vector2d FrictionCone::project_horizontal(double lam_N, const Eigen::Vector2d& lam_T) const {
  const double radius = mu_ * std::max(lam_N, 0.0);
  const double r = lam_T.norm();
  if (r <= radius) return lam_T;
  if (radius <= 0.0) return Eigen::Vector2d::Zero();
  return (radius / r) * lam_T;
}

Eigen::Vector2d FrictionCone::clamp_pyramid(double lam_N, const Eigen::Vector2d& lam_T) const {
  const double bound = mu_ * std::max(lam_N, 0.0);
  return lam_T.cwiseMax(-bound).cwiseMin(bound);
}

bool FrictionCone::pyramid_contains(const Eigen::Vector3d& lam) const {
  return lam(0) >= -kConeTolerance &&
         lam.tail<2>().cwiseAbs().maxCoeff() <= mu_ * lam(0) + kConeTolerance;
}

Eigen::Vector3d FrictionCone::project_pyramid(const Eigen::Vector3d& x) const {
  // Work in the quadrant t1, t2 >= 0 and restore signs at the end.
  const double s1 = x(1) < 0.0 ? -1.0 : 1.0;
  const double s2 = x(2) < 0.0 ? -1.0 : 1.0;
  const Eigen::Vector3d y(x(0), std::abs(x(1)), std::abs(x(2)));
  const double n = y(0), a = y(1), b = y(2);
  const double m = mu_;
  std::array<Eigen::Vector3d, 5> cand;
  cand[0] = y;
  const double sa = (n + m * a) / (1.0 + m * m);
  cand[1] = Eigen::Vector3d(sa, m * sa, b);
  const double sb = (n + m * b) / (1.0 + m * m);
  cand[2] = Eigen::Vector3d(sb, a, m * sb);
  const double se = std::max(0.0, (n + m * a + m * b) / (1.0 + 2.0 * m * m));
  cand[3] = Eigen::Vector3d(se, m * se, m * se);
  auto feasible = [this](const Eigen::Vector3d& p) {
    const double tol = kConeTolerance * (1.0 + p.norm());
    return p(0) >= -tol && p(1) >= -tol && p(2) >= -tol &&
           std::max(p(1), p(2)) <= mu_ * p(0) + tol;
  };
  Eigen::Vector3d out = nearest_feasible(y, cand, 4, feasible);
  out(1) *= s1;
  out(2) *= s2;
  return out;
}

Eigen::Vector3d FrictionCone::project_pyramid_dual(const Eigen::Vector3d& x) const {
  const double s1 = x(1) < 0.0 ? -1.0 : 1.0;
  const double s2 = x(2) < 0.0 ? -1.0 : 1.0;
  const Eigen::Vector3d y(x(0), std::abs(x(1)), std::abs(x(2)));
  const double n = y(0), a = y(1), b = y(2);
  const double m = mu_;
  std::array<Eigen::Vector3d, 5> cand;
  cand[0] = y;
  const Eigen::Vector3d normal(1.0, -m, -m);
  cand[1] = y - ((n - m * a - m * b) / normal.squaredNorm()) * normal;
  const double ra = std::max(0.0, (m * n + a) / (1.0 + m * m));
  cand[2] = Eigen::Vector3d(m * ra, ra, 0.0);
  const double rb = std::max(0.0, (m * n + b) / (1.0 + m * m));
  cand[3] = Eigen::Vector3d(m * rb, 0.0, rb);
  auto feasible = [this](const Eigen::Vector3d& p) {
    const double tol = kConeTolerance * (1.0 + p.norm());
    return p(1) >= -tol && p(2) >= -tol && mu_ * (p(1) + p(2)) <= p(0) + tol;
  };
  Eigen::Vector3d out = nearest_feasible(y, cand, 4, feasible);
  out(1) *= s1;
  out(2) *= s2;
  return out;
}

Eigen::Vector3d de_saxce_correction(const Eigen::Vector3d& c, double mu) {
  return Eigen::Vector3d(mu * c.tail<2>().norm(), 0.0, 0.0);
}

Eigen::Vector3d pyramid_de_saxce_correction(const Eigen::Vector3d& c, double mu) {
  return Eigen::Vector3d(mu * c.tail<2>().cwiseAbs().sum(), 0.0, 0.0);
}

}  // namespace contactbench
