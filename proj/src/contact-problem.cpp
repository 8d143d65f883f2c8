#include "contactbench/contact-problem.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace contactbench {

namespace {

void require_size(const Eigen::VectorXd& v, Eigen::Index n, const char* name) {
  if (v.size() != n) {
    throw std::invalid_argument(std::string(name) + ": expected " + std::to_string(n) +
                                " entries, got " + std::to_string(v.size()));
  }
}

template <class Dist, class Correction>
Residuals residuals_impl(const ContactProblem& problem, const Eigen::VectorXd& lam, Dist dist,
                         Correction correction) {
  const Eigen::VectorXd c = problem.contact_velocity(lam);
  const int nc = problem.num_contacts();
  Residuals res;
  res.primal.setZero(nc);
  res.dual.setZero(nc);
  res.complementarity.setZero(nc);
  for (int i = 0; i < nc; ++i) {
    const FrictionCone& cone = problem.cone(i);
    const Eigen::Vector3d li = lam.segment<3>(3 * i);
    const Eigen::Vector3d ci = c.segment<3>(3 * i);
    const Eigen::Vector3d shifted = ci + correction(ci, cone.mu());
    const auto [p, d] = dist(cone, li, shifted);
    res.primal(i) = p;
    res.dual(i) = d;
    res.complementarity(i) = std::abs(li.dot(shifted));
    res.ncp_criterion = std::max({res.ncp_criterion, p, d, res.complementarity(i)});
  }
  return res;
}

}  // namespace

ContactProblem::ContactProblem(Eigen::MatrixXd delassus, Eigen::VectorXd free_velocity,
                               const std::vector<double>& mus,
                               std::optional<Eigen::VectorXd> compliance)
    : free_velocity_(std::move(free_velocity)), compliance_(std::move(compliance)) {
  const auto nc = static_cast<Eigen::Index>(mus.size());
  const Eigen::Index n = 3 * nc;
  if (delassus.rows() != n || delassus.cols() != n) {
    throw std::invalid_argument("delassus: expected " + std::to_string(n) + "x" +
                                std::to_string(n) + " matrix");
  }
  require_size(free_velocity_, n, "free_velocity");
  if (!delassus.allFinite() || !free_velocity_.allFinite()) {
    throw std::invalid_argument("problem data must be finite");
  }
  const double scale = n > 0 ? std::max(1.0, delassus.cwiseAbs().maxCoeff()) : 1.0;
  if (n > 0 && (delassus - delassus.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw std::invalid_argument("delassus: matrix is not symmetric");
  }
  delassus_ = 0.5 * (delassus + delassus.transpose());
  if (n > 0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(delassus_, Eigen::EigenvaluesOnly);
    const double norm = eig.eigenvalues().cwiseAbs().maxCoeff();
    if (eig.eigenvalues().minCoeff() < -1e-10 * std::max(norm, 1e-300)) {
      throw std::invalid_argument("delassus: matrix is not positive semidefinite");
    }
  }
  cones_.reserve(mus.size());
  for (double mu : mus) cones_.emplace_back(mu);
  effective_ = delassus_;
  if (compliance_) {
    require_size(*compliance_, n, "compliance");
    if ((compliance_->array() < 0.0).any() || !compliance_->allFinite()) {
      throw std::invalid_argument("compliance: entries must be finite and >= 0");
    }
    effective_.diagonal() += *compliance_;
  }
}

Eigen::VectorXd ContactProblem::contact_velocity(const Eigen::VectorXd& lam) const {
  require_size(lam, size(), "lambda");
  return effective_ * lam + free_velocity_;
}

Residuals compute_residuals(const ContactProblem& problem, const Eigen::VectorXd& lam) {
  return residuals_impl(
      problem, lam,
      [](const FrictionCone& cone, const Eigen::Vector3d& l, const Eigen::Vector3d& y) {
        return std::pair{cone.distance(l), cone.dual_distance(y)};
      },
      de_saxce_correction);
}

Residuals compute_pyramid_residuals(const ContactProblem& problem, const Eigen::VectorXd& lam) {
  return residuals_impl(
      problem, lam,
      [](const FrictionCone& cone, const Eigen::Vector3d& l, const Eigen::Vector3d& y) {
        return std::pair{(l - cone.project_pyramid(l)).norm(),
                         (y - cone.project_pyramid_dual(y)).norm()};
      },
      pyramid_de_saxce_correction);
}

double ccp_stationarity(const ContactProblem& problem, const Eigen::VectorXd& lam) {
  const Eigen::VectorXd c = problem.contact_velocity(lam);
  double worst = 0.0;
  for (int i = 0; i < problem.num_contacts(); ++i) {
    const Eigen::Vector3d li = lam.segment<3>(3 * i);
    const Eigen::Vector3d step = li - problem.cone(i).project(li - c.segment<3>(3 * i));
    worst = std::max(worst, step.cwiseAbs().maxCoeff());
  }
  return worst;
}

Eigen::VectorXd ccp_complementarity(const ContactProblem& problem, const Eigen::VectorXd& lam) {
  const Eigen::VectorXd c = problem.contact_velocity(lam);
  Eigen::VectorXd out(problem.num_contacts());
  for (int i = 0; i < problem.num_contacts(); ++i) {
    out(i) = lam.segment<3>(3 * i).dot(c.segment<3>(3 * i));
  }
  return out;
}

}  // namespace contactbench
