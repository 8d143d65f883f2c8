#ifndef CONTACTBENCH_SRC_SOLVER_COMMON_HPP
#define CONTACTBENCH_SRC_SOLVER_COMMON_HPP

#include <chrono>
#include <functional>
#include <optional>

#include <Eigen/Core>

#include "contactbench/contact-problem.hpp"
#include "contactbench/contact-solution.hpp"
#include "contactbench/solver-config.hpp"

namespace contactbench::detail {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

/// Warm-start lambda or zeros. Throws std::invalid_argument on a size mismatch.
Eigen::VectorXd initial_lambda(const ContactProblem& problem, const SolverConfig& config);

/// Solution for n_c = 0.
ContactSolution empty_solution();

/// Appends one iteration to the trace.
void record_iteration(SolveTrace& trace, const SolverConfig& config, const Eigen::VectorXd& lam,
                      double ncp, double stopping);

/// Fills velocity, residuals and timing.
ContactSolution finish(const ContactProblem& problem, Eigen::VectorXd lam, int iterations,
                       bool converged, double stopping, SolveTrace trace, const Stopwatch& clock);

/// omega * candidate + (1 - omega) * previous.
inline double blend(double previous, double candidate, double omega) {
  return omega * candidate + (1.0 - omega) * previous;
}
template <class A, class B>
auto blend(const Eigen::MatrixBase<A>& previous, const Eigen::MatrixBase<B>& candidate,
           double omega) {
  return (omega * candidate + (1.0 - omega) * previous).eval();
}

/// Minimizes 1/2 x'Hx + f'x over a closed convex set given by its projection.
struct AdmmResult {
  Eigen::VectorXd lambda;  ///< unprojected iterate
  Eigen::VectorXd z;       ///< projected iterate
  Eigen::VectorXd dual;
  double rho = 0.0;
  int iterations = 0;
  bool converged = false;
  double primal_gap = 0.0;
  double dual_gap = 0.0;
};

struct AdmmOptions {
  double rho = 1.0;
  double eps = 1e-8;
  int max_iterations = 1000;
  bool adaptive_rho = false;
  double omega = 1.0;
};

using Projection = std::function<void(Eigen::VectorXd&)>;
/// Called after each iteration with (z, primal gap, dual gap).
using AdmmObserver = std::function<void(const Eigen::VectorXd&, double, double)>;

/// Throws NumericalError when H + rho I is not positive definite.
AdmmResult admm_qp(const Eigen::MatrixXd& H, const Eigen::VectorXd& f, const Projection& project,
                   const Eigen::VectorXd& z0, const std::optional<Eigen::VectorXd>& dual0,
                   const AdmmOptions& options, const AdmmObserver& observer = {});

}  // namespace contactbench::detail

#endif
