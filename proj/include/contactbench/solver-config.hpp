#ifndef CONTACTBENCH_SOLVER_CONFIG_HPP
#define CONTACTBENCH_SOLVER_CONFIG_HPP

#include <cstdint>
#include <optional>

#include <Eigen/Core>

namespace contactbench {

/// Initial iterate. dual and rho are read by the ADMM-based solvers only.
struct WarmStart {
  Eigen::VectorXd lambda;
  std::optional<Eigen::VectorXd> dual;
  std::optional<double> rho;
};

/// Damping schedule of the per-contact bisection solver:
/// lam <- alpha lam + (1 - alpha) lam*, then alpha <- gamma alpha + (1 - gamma) alpha_min.
struct RaisimDamping {
  double alpha0 = 0.9;
  double gamma = 0.99;
  double alpha_min = 0.1;
};

struct SolverConfig {
  int max_iterations = 1000;
  double eps_abs = 1e-8;
  /// omega in (0, 2); each block update becomes omega * candidate + (1 - omega) * previous.
  double over_relaxation = 1.0;
  /// Defaults to 0.1 trace(G~) / (3 n_c) when unset.
  std::optional<double> admm_rho;
  bool adaptive_rho = false;
  std::optional<WarmStart> warm_start;
  /// No algorithm here randomizes; kept so configs round-trip unchanged.
  std::uint64_t rng_seed = 0;
  RaisimDamping raisim;
  /// Staggered inner QPs: iteration cap per QP; tolerance is 0.1 eps_abs.
  int inner_max_iterations = 2000;
  /// Number of per-iteration lambda snapshots kept in the trace.
  int trace_snapshots = 0;
};

/// Throws std::invalid_argument when a field is out of range.
void validate(const SolverConfig& config);

}  // namespace contactbench

#endif
