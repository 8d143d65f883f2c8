#ifndef CONTACTBENCH_SOLVERS_HPP
#define CONTACTBENCH_SOLVERS_HPP

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "contactbench/contact-problem.hpp"
#include "contactbench/contact-solution.hpp"
#include "contactbench/solver-config.hpp"

namespace contactbench {

enum class SolverKind { LcpPgs, CcpPgs, CcpAdmm, Raisim, NcpPgs, Staggered };

inline constexpr std::array<SolverKind, 6> kAllSolvers = {
    SolverKind::LcpPgs, SolverKind::CcpPgs,  SolverKind::CcpAdmm,
    SolverKind::Raisim, SolverKind::NcpPgs, SolverKind::Staggered};

/// Command-line names: lcp-pgs, ccp-pgs, ccp-admm, raisim, ncp-pgs, staggered.
std::string_view solver_name(SolverKind kind);
std::optional<SolverKind> parse_solver(std::string_view name);

/// Library defaults, except five outer iterations for the staggered solver.
SolverConfig default_config(SolverKind kind);

ContactSolution solve(SolverKind kind, const ContactProblem& problem, const SolverConfig& config);

/// Pyramidal friction, projected Gauss-Seidel. Stops on compute_pyramid_residuals.
ContactSolution solve_lcp_pgs(const ContactProblem& problem, const SolverConfig& config);
/// Convex relaxation, projected Gauss-Seidel with step 3 / trace(G_ii). Stops on ccp_stationarity.
ContactSolution solve_ccp_pgs(const ContactProblem& problem, const SolverConfig& config);
/// Convex relaxation, ADMM on (G~ + rho I). Returns the projected iterate z.
ContactSolution solve_ccp_admm(const ContactProblem& problem, const SolverConfig& config);
/// Per-contact exact subproblems with damping. Stops on |dlam|_inf and the Signorini residual.
ContactSolution solve_raisim(const ContactProblem& problem, const SolverConfig& config);
/// Exact contact law, projected Gauss-Seidel with a horizontal tangential projection.
ContactSolution solve_ncp_pgs(const ContactProblem& problem, const SolverConfig& config);
/// Alternating normal and tangential QPs, each solved by ADMM.
ContactSolution solve_staggered(const ContactProblem& problem, const SolverConfig& config);

/// Minimizes 1/2 lam' G lam + g' lam over K_mu restricted to G_N lam + g_N = 0.
/// The result lies on the cone boundary. Throws SlidingSolveError(contact) when
/// g_N > 0 leaves the restricted set empty.
Eigen::Vector3d bisection_sliding(const Eigen::Matrix3d& G, const Eigen::Vector3d& g_tilde,
                                  const FrictionCone& cone, const Eigen::Vector3d& lambda_v0,
                                  int contact = 0);

/// alpha lam_prev + (1 - alpha) lam_new, alpha in [0, 2).
Eigen::VectorXd over_relax(const Eigen::VectorXd& lam_prev, const Eigen::VectorXd& lam_new,
                           double alpha);

enum class OracleBranch { Takeoff, Sticking, Sliding };

struct OracleSolution {
  Eigen::Vector3d lambda;
  OracleBranch branch;
  double ncp_criterion;
};

/// Every branch candidate satisfying the contact law to 1e-9, in the order
/// take-off, sticking, sliding. Requires one contact and SPD G.
std::vector<OracleSolution> enumerate_single_contact(const ContactProblem& problem);

/// First valid candidate of enumerate_single_contact. Throws OracleFailure if none.
OracleSolution analytic_single_contact(const ContactProblem& problem);

}  // namespace contactbench

#endif
