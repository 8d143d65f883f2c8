#ifndef CONTACTBENCH_CONTACT_SOLUTION_HPP
#define CONTACTBENCH_CONTACT_SOLUTION_HPP

#include <Eigen/Core>

#include "contactbench/contact-problem.hpp"
#include "contactbench/solve-trace.hpp"

namespace contactbench {

struct ContactSolution {
  Eigen::VectorXd lambda;
  /// G~ lam + g.
  Eigen::VectorXd contact_velocity;
  /// Exact contact-law residuals, whatever model the solver targets.
  Residuals residuals;
  /// Value of the solver's own stopping quantity at exit.
  double stopping_criterion = 0.0;
  int iterations = 0;
  bool converged = false;
  double solve_time = 0.0;  ///< seconds
  SolveTrace trace;
  /// ADMM multiplier and penalty at exit, for warm starts. Empty for other solvers.
  Eigen::VectorXd dual;
  double rho = 0.0;
};

}  // namespace contactbench

#endif
