#include <algorithm>
#include <cmath>

#include "contactbench/errors.hpp"
#include "contactbench/solvers.hpp"
#include "solver-common.hpp"

namespace contactbench {

namespace {

enum class TangentialRule { Pyramid, Horizontal };

struct BlockSteps {
  double normal;
  double tangential;
};

std::vector<BlockSteps> normal_tangential_steps(const ContactProblem& problem) {
  std::vector<BlockSteps> steps;
  for (int i = 0; i < problem.num_contacts(); ++i) {
    const Eigen::Matrix3d B = problem.block(i, i);
    if (!(B(0, 0) > 0.0)) throw SingularBlockError(i, "zero normal diagonal entry");
    const double t = std::max(B(1, 1), B(2, 2));
    if (problem.cone(i).mu() > 0.0 && !(t > 0.0)) {
      throw SingularBlockError(i, "zero tangential diagonal entry");
    }
    steps.push_back({1.0 / B(0, 0), t > 0.0 ? 1.0 / t : 0.0});
  }
  return steps;
}

// Shared sweep of the pyramidal and exact-law Gauss-Seidel solvers: exact
// normal update, then a tangential gradient step on the refreshed velocity.
ContactSolution solve_normal_tangential(const ContactProblem& problem,
                                        const SolverConfig& config, TangentialRule rule) {
  detail::Stopwatch clock;
  validate(config);
  if (problem.num_contacts() == 0) return detail::empty_solution();
  const std::vector<BlockSteps> steps = normal_tangential_steps(problem);
  const Eigen::MatrixXd& G = problem.effective_delassus();
  const Eigen::VectorXd& g = problem.free_velocity();
  const double omega = config.over_relaxation;

  auto criterion = [&](const Eigen::VectorXd& lam, double& ncp) {
    ncp = compute_residuals(problem, lam).ncp_criterion;
    return rule == TangentialRule::Pyramid ? compute_pyramid_residuals(problem, lam).ncp_criterion
                                           : ncp;
  };

  Eigen::VectorXd lam = detail::initial_lambda(problem, config);
  SolveTrace trace;
  double ncp = 0.0;
  double stop = 0.0;
  bool converged = false;
  int it = 0;
  while (it < config.max_iterations) {
    ++it;
    for (int i = 0; i < problem.num_contacts(); ++i) {
      const FrictionCone& cone = problem.cone(i);
      Eigen::Vector3d c = G.middleRows<3>(3 * i) * lam + g.segment<3>(3 * i);
      const double old_N = lam(3 * i);
      const double cand_N = old_N - steps[i].normal * c(0);
      const double new_N = std::max(0.0, detail::blend(old_N, cand_N, omega));
      lam(3 * i) = new_N;
      // Tangential velocity after the normal update.
      c.tail<2>() += G.block<2, 1>(3 * i + 1, 3 * i) * (new_N - old_N);
      const Eigen::Vector2d old_T = lam.segment<2>(3 * i + 1);
      const Eigen::Vector2d cand_T = old_T - steps[i].tangential * c.tail<2>();
      const Eigen::Vector2d blended = detail::blend(old_T, cand_T, omega);
      lam.segment<2>(3 * i + 1) = rule == TangentialRule::Pyramid
                                      ? cone.clamp_pyramid(new_N, blended)
                                      : cone.project_horizontal(new_N, blended);
    }
    stop = criterion(lam, ncp);
    detail::record_iteration(trace, config, lam, ncp, stop);
    if (stop <= config.eps_abs) {
      converged = true;
      break;
    }
  }
  return detail::finish(problem, std::move(lam), it, converged, stop, std::move(trace), clock);
}

}  // namespace

ContactSolution solve_lcp_pgs(const ContactProblem& problem, const SolverConfig& config) {
  return solve_normal_tangential(problem, config, TangentialRule::Pyramid);
}

ContactSolution solve_ncp_pgs(const ContactProblem& problem, const SolverConfig& config) {
  return solve_normal_tangential(problem, config, TangentialRule::Horizontal);
}

ContactSolution solve_ccp_pgs(const ContactProblem& problem, const SolverConfig& config) {
  detail::Stopwatch clock;
  validate(config);
  if (problem.num_contacts() == 0) return detail::empty_solution();
  const Eigen::MatrixXd& G = problem.effective_delassus();
  const Eigen::VectorXd& g = problem.free_velocity();
  const double omega = config.over_relaxation;
  std::vector<double> step(static_cast<size_t>(problem.num_contacts()));
  for (int i = 0; i < problem.num_contacts(); ++i) {
    const double tr = problem.block(i, i).trace();
    if (!(tr > 0.0)) throw SingularBlockError(i, "zero trace diagonal block");
    step[static_cast<size_t>(i)] = 3.0 / tr;
  }

  Eigen::VectorXd lam = detail::initial_lambda(problem, config);
  SolveTrace trace;
  double stop = 0.0;
  bool converged = false;
  int it = 0;
  while (it < config.max_iterations) {
    ++it;
    for (int i = 0; i < problem.num_contacts(); ++i) {
      const Eigen::Vector3d c = G.middleRows<3>(3 * i) * lam + g.segment<3>(3 * i);
      const Eigen::Vector3d old = lam.segment<3>(3 * i);
      const Eigen::Vector3d cand = old - step[static_cast<size_t>(i)] * c;
      lam.segment<3>(3 * i) = problem.cone(i).project(detail::blend(old, cand, omega));
    }
    stop = ccp_stationarity(problem, lam);
    detail::record_iteration(trace, config, lam, compute_residuals(problem, lam).ncp_criterion,
                             stop);
    if (stop <= config.eps_abs) {
      converged = true;
      break;
    }
  }
  return detail::finish(problem, std::move(lam), it, converged, stop, std::move(trace), clock);
}

}  // namespace contactbench
