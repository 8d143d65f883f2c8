#ifndef CONTACTBENCH_CONTACT_PROBLEM_HPP
#define CONTACTBENCH_CONTACT_PROBLEM_HPP

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "contactbench/cone.hpp"

namespace contactbench {

/// The (G, g, mu, R) tuple consumed by every solver.
///
/// Impulses, velocities and G are ordered per contact as (N, T1, T2) blocks.
/// g already carries the target velocity offset. When a compliance diagonal R
/// is present, solvers work with G~ = G + R and the contact velocity is G~ lam + g.
class ContactProblem {
 public:
  ContactProblem() = default;
  /// Throws std::invalid_argument on inconsistent sizes, asymmetric or
  /// indefinite G, or negative compliance. G is stored symmetrized.
  ContactProblem(Eigen::MatrixXd delassus, Eigen::VectorXd free_velocity,
                 const std::vector<double>& mus,
                 std::optional<Eigen::VectorXd> compliance = std::nullopt);

  int num_contacts() const { return static_cast<int>(cones_.size()); }
  Eigen::Index size() const { return free_velocity_.size(); }

  const Eigen::MatrixXd& delassus() const { return delassus_; }
  const Eigen::MatrixXd& effective_delassus() const { return effective_; }
  const Eigen::VectorXd& free_velocity() const { return free_velocity_; }
  const std::vector<FrictionCone>& cones() const { return cones_; }
  const FrictionCone& cone(int i) const { return cones_[static_cast<size_t>(i)]; }
  const std::optional<Eigen::VectorXd>& compliance() const { return compliance_; }

  Eigen::Matrix3d block(int i, int j) const { return effective_.block<3, 3>(3 * i, 3 * j); }

  /// c = G~ lam + g. Throws std::invalid_argument on a size mismatch.
  Eigen::VectorXd contact_velocity(const Eigen::VectorXd& lam) const;

 private:
  Eigen::MatrixXd delassus_;
  Eigen::MatrixXd effective_;
  Eigen::VectorXd free_velocity_;
  std::vector<FrictionCone> cones_;
  std::optional<Eigen::VectorXd> compliance_;
};

struct Residuals {
  Eigen::VectorXd primal;           ///< per contact, dist(lam_i, K)
  Eigen::VectorXd dual;             ///< per contact, dist(c_i + Gamma, K*)
  Eigen::VectorXd complementarity;  ///< per contact, |<lam_i, c_i + Gamma>|
  double ncp_criterion = 0.0;       ///< max of all entries above
};

/// Residuals of the exact contact law (Coulomb cone, De Saxce correction).
Residuals compute_residuals(const ContactProblem& problem, const Eigen::VectorXd& lam);

/// Residuals of the pyramidal model: K~, its dual, and the l1 correction.
Residuals compute_pyramid_residuals(const ContactProblem& problem, const Eigen::VectorXd& lam);

/// |lam - P_K(lam - c)|_inf, zero exactly at the convex relaxation's optimum.
double ccp_stationarity(const ContactProblem& problem, const Eigen::VectorXd& lam);

/// Per-contact <lam_i, c_i> without correction.
Eigen::VectorXd ccp_complementarity(const ContactProblem& problem, const Eigen::VectorXd& lam);

}  // namespace contactbench

#endif
