#include "solver-common.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Cholesky>

#include "contactbench/errors.hpp"

namespace contactbench {

void validate(const SolverConfig& config) {
  if (config.max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
  if (!(config.eps_abs > 0.0)) throw std::invalid_argument("eps_abs must be > 0");
  if (!(config.over_relaxation > 0.0 && config.over_relaxation < 2.0)) {
    throw std::invalid_argument("over_relaxation must lie in (0, 2)");
  }
  if (config.admm_rho && !(*config.admm_rho > 0.0)) {
    throw std::invalid_argument("admm_rho must be > 0");
  }
  const RaisimDamping& d = config.raisim;
  if (!(d.alpha0 >= 0.0 && d.alpha0 < 1.0 && d.gamma >= 0.0 && d.gamma <= 1.0 &&
        d.alpha_min >= 0.0 && d.alpha_min < 1.0)) {
    throw std::invalid_argument("raisim damping constants must lie in [0, 1)");
  }
  if (config.inner_max_iterations < 1) {
    throw std::invalid_argument("inner_max_iterations must be >= 1");
  }
  if (config.trace_snapshots < 0) throw std::invalid_argument("trace_snapshots must be >= 0");
}

Eigen::VectorXd over_relax(const Eigen::VectorXd& lam_prev, const Eigen::VectorXd& lam_new,
                           double alpha) {
  if (!(alpha >= 0.0 && alpha < 2.0)) {
    throw std::invalid_argument("over_relax: alpha must lie in [0, 2)");
  }
  if (lam_prev.size() != lam_new.size()) {
    throw std::invalid_argument("over_relax: size mismatch");
  }
  return alpha * lam_prev + (1.0 - alpha) * lam_new;
}

}  // namespace contactbench

namespace contactbench::detail {

Eigen::VectorXd initial_lambda(const ContactProblem& problem, const SolverConfig& config) {
  if (!config.warm_start) return Eigen::VectorXd::Zero(problem.size());
  const Eigen::VectorXd& lam = config.warm_start->lambda;
  if (lam.size() != problem.size()) {
    throw std::invalid_argument("warm_start: expected " + std::to_string(problem.size()) +
                                " entries, got " + std::to_string(lam.size()));
  }
  return lam;
}

ContactSolution empty_solution() {
  ContactSolution sol;
  sol.lambda.resize(0);
  sol.contact_velocity.resize(0);
  sol.residuals.primal.resize(0);
  sol.residuals.dual.resize(0);
  sol.residuals.complementarity.resize(0);
  sol.converged = true;
  return sol;
}

void record_iteration(SolveTrace& trace, const SolverConfig& config, const Eigen::VectorXd& lam,
                      double ncp, double stopping) {
  trace.ncp_criterion.push_back(ncp);
  trace.stopping_criterion.push_back(stopping);
  if (static_cast<int>(trace.snapshots.size()) < config.trace_snapshots) {
    trace.snapshots.push_back(lam);
  }
}

ContactSolution finish(const ContactProblem& problem, Eigen::VectorXd lam, int iterations,
                       bool converged, double stopping, SolveTrace trace, const Stopwatch& clock) {
  ContactSolution sol;
  sol.contact_velocity = problem.contact_velocity(lam);
  sol.residuals = compute_residuals(problem, lam);
  sol.lambda = std::move(lam);
  sol.iterations = iterations;
  sol.converged = converged;
  sol.stopping_criterion = stopping;
  sol.trace = std::move(trace);
  sol.solve_time = clock.seconds();
  return sol;
}

namespace {

Eigen::LLT<Eigen::MatrixXd> factorize(const Eigen::MatrixXd& H, double rho) {
  Eigen::MatrixXd A = H;
  A.diagonal().array() += rho;
  Eigen::LLT<Eigen::MatrixXd> llt(A);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("factorization of G + R + rho I failed (rho = " + std::to_string(rho) +
                             ")",
                         rho);
  }
  return llt;
}

}  // namespace

AdmmResult admm_qp(const Eigen::MatrixXd& H, const Eigen::VectorXd& f, const Projection& project,
                   const Eigen::VectorXd& z0, const std::optional<Eigen::VectorXd>& dual0,
                   const AdmmOptions& options, const AdmmObserver& observer) {
  AdmmResult out;
  double rho = options.rho;
  if (!(rho > 0.0) || !std::isfinite(rho)) throw NumericalError("rho must be > 0", rho);
  Eigen::LLT<Eigen::MatrixXd> llt = factorize(H, rho);

  Eigen::VectorXd z = z0;
  project(z);
  Eigen::VectorXd gamma;
  if (dual0 && dual0->size() == f.size()) {
    gamma = *dual0;
  } else {
    // Makes an exact warm start a fixed point.
    gamma = -(H * z + f);
  }
  Eigen::VectorXd lam = z;
  Eigen::VectorXd z_prev(z.size());
  Eigen::VectorXd lam_or(z.size());
  for (int k = 1; k <= options.max_iterations; ++k) {
    lam = llt.solve(rho * z - gamma - f);
    z_prev = z;
    lam_or = blend(z_prev, lam, options.omega);
    z = lam_or + gamma / rho;
    project(z);
    gamma += rho * (lam_or - z);
    out.primal_gap = (lam - z).cwiseAbs().maxCoeff();
    out.dual_gap = rho * (z - z_prev).cwiseAbs().maxCoeff();
    out.iterations = k;
    if (observer) observer(z, out.primal_gap, out.dual_gap);
    if (out.primal_gap <= options.eps && out.dual_gap <= options.eps) {
      out.converged = true;
      break;
    }
    if (options.adaptive_rho) {
      double next = rho;
      if (out.primal_gap > 10.0 * out.dual_gap) {
        next = 2.0 * rho;
      } else if (out.dual_gap > 10.0 * out.primal_gap) {
        next = 0.5 * rho;
      }
      if (next != rho && next >= 1e-12 && next <= 1e12) {
        rho = next;
        llt = factorize(H, rho);
      }
    }
  }
  out.lambda = std::move(lam);
  out.z = std::move(z);
  out.dual = std::move(gamma);
  out.rho = rho;
  return out;
}

}  // namespace contactbench::detail
