#include <cmath>
#include <numbers>

#include <Eigen/Cholesky>

#include "contactbench/errors.hpp"
#include "contactbench/solvers.hpp"

namespace contactbench {

namespace {

constexpr double kOracleTolerance = 1e-9;
constexpr int kAngleSamples = 2880;

// Sliding candidates lam = lam_N (1, mu cos phi, mu sin phi) with c_N = 0.
// Roots of the cross product between the friction direction and c_T, kept when
// friction opposes slip.
std::vector<Eigen::Vector3d> sliding_candidates(const Eigen::Matrix3d& G, const Eigen::Vector3d& g,
                                                double mu) {
  std::vector<Eigen::Vector3d> out;
  if (g(0) >= 0.0) return out;
  if (mu == 0.0) {
    out.emplace_back(-g(0) / G(0, 0), 0.0, 0.0);
    return out;
  }
  auto lam_at = [&](double phi, bool& ok) {
    const Eigen::Vector3d w(1.0, mu * std::cos(phi), mu * std::sin(phi));
    const double den = G.row(0).dot(w);
    ok = den > 0.0;
    return Eigen::Vector3d((ok ? -g(0) / den : 0.0) * w);
  };
  auto cross = [&](double phi, bool& ok) {
    const Eigen::Vector3d lam = lam_at(phi, ok);
    const Eigen::Vector3d c = G * lam + g;
    return std::cos(phi) * c(2) - std::sin(phi) * c(1);
  };
  const double two_pi = 2.0 * std::numbers::pi;
  double prev_phi = 0.0;
  bool prev_ok = false;
  double prev_h = cross(prev_phi, prev_ok);
  for (int k = 1; k <= kAngleSamples; ++k) {
    const double phi = two_pi * k / kAngleSamples;
    bool ok = false;
    const double h = cross(phi, ok);
    if (ok && prev_ok && ((prev_h <= 0.0 && h >= 0.0) || (prev_h >= 0.0 && h <= 0.0))) {
      double lo = prev_phi, hi = phi, h_lo = prev_h;
      for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        bool mid_ok = false;
        const double h_mid = cross(mid, mid_ok);
        if ((h_lo <= 0.0) == (h_mid <= 0.0)) {
          lo = mid;
          h_lo = h_mid;
        } else {
          hi = mid;
        }
      }
      bool root_ok = false;
      const double root = 0.5 * (lo + hi);
      const Eigen::Vector3d lam = lam_at(root, root_ok);
      const Eigen::Vector3d c = G * lam + g;
      if (root_ok && lam.tail<2>().dot(c.tail<2>()) < 0.0) out.push_back(lam);
    }
    prev_phi = phi;
    prev_ok = ok;
    prev_h = h;
  }
  return out;
}

}  // namespace

std::vector<OracleSolution> enumerate_single_contact(const ContactProblem& problem) {
  if (problem.num_contacts() != 1) {
    throw std::invalid_argument("oracle: expected exactly one contact");
  }
  const Eigen::Matrix3d G = problem.effective_delassus();
  const Eigen::Vector3d g = problem.free_velocity();
  const double mu = problem.cone(0).mu();
  Eigen::LLT<Eigen::Matrix3d> llt(G);
  if (llt.info() != Eigen::Success) throw std::invalid_argument("oracle: G must be SPD");

  std::vector<std::pair<Eigen::Vector3d, OracleBranch>> candidates;
  if (g(0) >= 0.0) candidates.emplace_back(Eigen::Vector3d::Zero(), OracleBranch::Takeoff);
  const Eigen::Vector3d stick = -llt.solve(g);
  if (problem.cone(0).contains(stick)) candidates.emplace_back(stick, OracleBranch::Sticking);
  for (const Eigen::Vector3d& lam : sliding_candidates(G, g, mu)) {
    candidates.emplace_back(lam, OracleBranch::Sliding);
  }

  std::vector<OracleSolution> out;
  for (const auto& [lam, branch] : candidates) {
    const double r = compute_residuals(problem, lam).ncp_criterion;
    if (r <= kOracleTolerance) out.push_back({lam, branch, r});
  }
  return out;
}

OracleSolution analytic_single_contact(const ContactProblem& problem) {
  std::vector<OracleSolution> all = enumerate_single_contact(problem);
  if (all.empty()) throw OracleFailure("no branch satisfies the contact law");
  return all.front();
}

}  // namespace contactbench
