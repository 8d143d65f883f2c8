#include <string>

#include "contactbench/errors.hpp"
#include "contactbench/solvers.hpp"
#include "solver-common.hpp"

namespace contactbench {

namespace {

// 0.1 trace(H) / dim(H).
double default_rho(const Eigen::MatrixXd& H) {
  const double per_row = H.trace() / static_cast<double>(H.rows());
  return per_row > 0.0 ? 0.1 * per_row : 1.0;
}

}  // namespace

ContactSolution solve_ccp_admm(const ContactProblem& problem, const SolverConfig& config) {
  detail::Stopwatch clock;
  validate(config);
  if (problem.num_contacts() == 0) return detail::empty_solution();
  const Eigen::MatrixXd& G = problem.effective_delassus();

  detail::AdmmOptions opts;
  opts.rho = config.admm_rho.value_or(default_rho(G));
  std::optional<Eigen::VectorXd> dual0;
  if (config.warm_start) {
    if (config.warm_start->rho) opts.rho = *config.warm_start->rho;
    dual0 = config.warm_start->dual;
  }
  opts.eps = config.eps_abs;
  opts.max_iterations = config.max_iterations;
  opts.adaptive_rho = config.adaptive_rho;
  opts.omega = config.over_relaxation;

  auto project = [&problem](Eigen::VectorXd& x) {
    for (int i = 0; i < problem.num_contacts(); ++i) {
      x.segment<3>(3 * i) = problem.cone(i).project(x.segment<3>(3 * i));
    }
  };
  SolveTrace trace;
  auto observer = [&](const Eigen::VectorXd& z, double primal, double dual) {
    detail::record_iteration(trace, config, z, compute_residuals(problem, z).ncp_criterion,
                             std::max(primal, dual));
    trace.primal_gap.push_back(primal);
  };
  const detail::AdmmResult r =
      detail::admm_qp(G, problem.free_velocity(), project, detail::initial_lambda(problem, config),
                      dual0, opts, observer);
  ContactSolution sol =
      detail::finish(problem, r.z, r.iterations, r.converged,
                     std::max(r.primal_gap, r.dual_gap), std::move(trace), clock);
  sol.dual = r.dual;
  sol.rho = r.rho;
  return sol;
}

ContactSolution solve_staggered(const ContactProblem& problem, const SolverConfig& config) {
  detail::Stopwatch clock;
  validate(config);
  const int nc = problem.num_contacts();
  if (nc == 0) return detail::empty_solution();
  const Eigen::MatrixXd& G = problem.effective_delassus();
  const Eigen::VectorXd& g = problem.free_velocity();

  std::vector<Eigen::Index> n_idx, t_idx;
  for (int i = 0; i < nc; ++i) {
    n_idx.push_back(3 * i);
    t_idx.push_back(3 * i + 1);
    t_idx.push_back(3 * i + 2);
  }
  const Eigen::MatrixXd G_N = G(n_idx, n_idx);
  const Eigen::MatrixXd G_T = G(t_idx, t_idx);
  const Eigen::MatrixXd G_NT = G(n_idx, t_idx);
  const Eigen::VectorXd g_N = g(n_idx);
  const Eigen::VectorXd g_T = g(t_idx);

  Eigen::VectorXd lam = detail::initial_lambda(problem, config);
  Eigen::VectorXd lam_N = lam(n_idx);
  Eigen::VectorXd lam_T = lam(t_idx);

  detail::AdmmOptions opts;
  opts.eps = 0.1 * config.eps_abs;
  opts.max_iterations = config.inner_max_iterations;
  opts.adaptive_rho = config.adaptive_rho;
  const double rho_N = config.admm_rho.value_or(default_rho(G_N));
  const double rho_T = config.admm_rho.value_or(default_rho(G_T));

  auto project_N = [](Eigen::VectorXd& x) { x = x.cwiseMax(0.0); };
  auto project_T = [&](Eigen::VectorXd& x) {
    for (int i = 0; i < nc; ++i) {
      x.segment<2>(2 * i) = problem.cone(i).project_horizontal(lam_N(i), x.segment<2>(2 * i));
    }
  };

  SolveTrace trace;
  double stop = 0.0;
  bool converged = false;
  int it = 0;
  while (it < config.max_iterations) {
    ++it;
    try {
      opts.rho = rho_N;
      const Eigen::VectorXd f_N = g_N + G_NT * lam_T;
      lam_N = detail::admm_qp(G_N, f_N, project_N, lam_N, std::nullopt, opts).z;
    } catch (const NumericalError& e) {
      throw NumericalError(std::string("normal stage: ") + e.what(), e.rho);
    }
    try {
      opts.rho = rho_T;
      const Eigen::VectorXd f_T = g_T + G_NT.transpose() * lam_N;
      lam_T = detail::admm_qp(G_T, f_T, project_T, lam_T, std::nullopt, opts).z;
    } catch (const NumericalError& e) {
      throw NumericalError(std::string("tangential stage: ") + e.what(), e.rho);
    }
    lam(n_idx) = lam_N;
    lam(t_idx) = lam_T;
    stop = compute_residuals(problem, lam).ncp_criterion;
    detail::record_iteration(trace, config, lam, stop, stop);
    if (stop <= config.eps_abs) {
      converged = true;
      break;
    }
  }
  return detail::finish(problem, std::move(lam), it, converged, stop, std::move(trace), clock);
}

}  // namespace contactbench
