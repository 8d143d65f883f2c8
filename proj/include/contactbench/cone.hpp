#ifndef CONTACTBENCH_CONE_HPP
#define CONTACTBENCH_CONE_HPP

#include <Eigen/Core>

namespace contactbench {

/// Membership slack used on cone boundaries.
inline constexpr double kConeTolerance = 1e-12;

/// Coulomb cone K_mu = {lam_N >= 0, |lam_T| <= mu lam_N}, components ordered (N, T1, T2).
/// The dual cone is K_{1/mu}; for mu = 0 it is the half-space c_N >= 0.
class FrictionCone {
 public:
  FrictionCone() = default;
  explicit FrictionCone(double mu);

  double mu() const { return mu_; }

  bool contains(const Eigen::Vector3d& lam) const;
  Eigen::Vector3d project(const Eigen::Vector3d& x) const;
  Eigen::Vector3d project_dual(const Eigen::Vector3d& y) const;
  double distance(const Eigen::Vector3d& x) const { return (x - project(x)).norm(); }
  double dual_distance(const Eigen::Vector3d& y) const { return (y - project_dual(y)).norm(); }

  /// Radial clamp of lam_T onto the disk of radius mu lam_N.
  Eigen::Vector2d project_horizontal(double lam_N, const Eigen::Vector2d& lam_T) const;

  /// Componentwise clamp of lam_T to [-mu lam_N, mu lam_N].
  Eigen::Vector2d clamp_pyramid(double lam_N, const Eigen::Vector2d& lam_T) const;

  /// Pyramid K~ = {lam_N >= 0, |lam_T|_inf <= mu lam_N}, facets aligned with (T1, T2).
  bool pyramid_contains(const Eigen::Vector3d& lam) const;
  Eigen::Vector3d project_pyramid(const Eigen::Vector3d& x) const;
  /// Dual pyramid K~* = {y_N >= mu |y_T|_1}.
  Eigen::Vector3d project_pyramid_dual(const Eigen::Vector3d& y) const;

 private:
  double mu_ = 0.0;
};

inline bool cone_contains(const FrictionCone& cone, const Eigen::Vector3d& lam) {
  return cone.contains(lam);
}
inline Eigen::Vector3d project_soc(const FrictionCone& cone, const Eigen::Vector3d& x) {
  return cone.project(x);
}
inline Eigen::Vector2d project_horizontal(const FrictionCone& cone, double lam_N,
                                          const Eigen::Vector2d& lam_T) {
  return cone.project_horizontal(lam_N, lam_T);
}
inline Eigen::Vector2d clamp_pyramid(const FrictionCone& cone, double lam_N,
                                     const Eigen::Vector2d& lam_T) {
  return cone.clamp_pyramid(lam_N, lam_T);
}

/// Gamma(c, mu) = (mu |c_T|_2; 0, 0).
Eigen::Vector3d de_saxce_correction(const Eigen::Vector3d& c, double mu);

/// Pyramid analogue (mu |c_T|_1; 0, 0): zero on box-friction fixed points.
Eigen::Vector3d pyramid_de_saxce_correction(const Eigen::Vector3d& c, double mu);

}  // namespace contactbench

#endif
