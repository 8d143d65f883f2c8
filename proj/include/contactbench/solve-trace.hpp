#ifndef CONTACTBENCH_SOLVE_TRACE_HPP
#define CONTACTBENCH_SOLVE_TRACE_HPP

#include <vector>

#include <Eigen/Core>

namespace contactbench {

struct BranchCounts {
  long takeoff = 0;
  long stiction = 0;
  long sliding = 0;
};

/// Per-iteration history of a solve. Both series have one entry per iteration.
struct SolveTrace {
  std::vector<double> ncp_criterion;
  /// The quantity the solver stops on (differs from ncp_criterion for LCP, CCP and RaiSim).
  std::vector<double> stopping_criterion;
  /// |lam - z|_inf per iteration, ADMM only.
  std::vector<double> primal_gap;
  /// First config.trace_snapshots iterates.
  std::vector<Eigen::VectorXd> snapshots;
  BranchCounts branches;
};

}  // namespace contactbench

#endif
