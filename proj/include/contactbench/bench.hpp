#ifndef CONTACTBENCH_BENCH_HPP
#define CONTACTBENCH_BENCH_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "contactbench/dynamics.hpp"
#include "contactbench/solvers.hpp"

namespace contactbench {

/// Gravity magnitude of the builtin scenes and analytic references, m/s^2.
inline constexpr double kGravity = 9.81;

// Builtin scenes. All cubes are 1 m wide (half-extent 0.5) and start at rest on the floor.

/// 1 kg cube sliding along +y at v0 with friction mu.
Scene sliding_cube_scene(double v0 = 1.0, double mu = 0.3, double tangent_rotation = 0.0);
/// Same with the tangent basis rotated by 45 degrees about the normal.
Scene sliding_cube_rotated45_scene();
/// 1 kg cube, mu 0.5, pulled along +y by a force growing at `rate` N/s from t = 0.
Scene growing_force_cube_scene(double rate = 20.0, double mu = 0.5);
/// Upper cube of mass sqrt(ratio) resting on a lower cube of mass 1/sqrt(ratio).
Scene stacked_cubes_scene(double mass_ratio);
/// 1 kg cube released with its bottom face `height` above the floor.
Scene dropped_cube_scene(double height = 0.5, double restitution = 0.5);
/// 1 kg cube at rest with compliance R on every contact direction and no Baumgarte term.
Scene compliant_rest_scene(double compliance = 1e-2);

/// Names accepted by builtin_scene.
const std::vector<std::string>& builtin_scene_ids();

/// Resolves "name" or "name(arg, ...)", e.g. "stacked_cubes(1e6)" or
/// "dropped_cube(0.5, 0.5)". Empty for an unknown name; bad arguments throw
/// std::invalid_argument.
std::optional<Scene> builtin_scene(const std::string& id);

/// Solver to run in a scenario with its configuration.
struct SolverRun {
  SolverKind kind;
  SolverConfig config;
};

struct ScenarioSpec {
  std::string name;
  Scene scene;
  double duration = 1.0;  ///< seconds; the time step is scene.dt
  std::vector<SolverRun> solvers;
  bool warm = true;
  /// Keep per-step problems in the record (memory heavy; used for offline checks).
  bool keep_problems = false;
};

/// Throws std::invalid_argument on duration <= 0, dt <= 0 or dt > duration.
void validate(const ScenarioSpec& spec);

/// `solvers` with each kind's default configuration and the given tolerance.
std::vector<SolverRun> solver_runs(const std::vector<SolverKind>& kinds, double eps,
                                   int max_iterations);

struct StepRecord {
  double time = 0.0;  ///< end of the step
  std::vector<RigidBodyState> states;
  std::vector<ContactPatch> patches;
  Eigen::VectorXd lambda;
  Residuals residuals;
  double stopping_criterion = 0.0;
  double energy = 0.0;
  int iterations = 0;
  bool converged = true;
  double solve_time = 0.0;  ///< seconds
  BranchCounts branches;
};

/// One solver's trajectory on a uniform grid t_k = k dt, k = 1..steps.
struct TrajectoryRecord {
  std::string scenario;
  SolverKind solver = SolverKind::NcpPgs;
  double dt = 0.0;
  std::vector<RigidBodyState> initial_states;
  double initial_energy = 0.0;
  std::vector<StepRecord> steps;
  std::vector<ContactProblem> problems;  ///< filled when keep_problems is set
  std::optional<std::string> error;      ///< message of the exception that stopped the run
};

/// Steps one solver from the scene's initial states for `duration`.
/// Exceptions are caught and recorded in the record's error field.
TrajectoryRecord run_trajectory(const Scene& scene, double duration, const SolverRun& run,
                                bool warm, bool keep_problems = false,
                                const std::string& scenario = {});

/// Runs each of spec.solvers on a fresh copy of the scene.
std::map<SolverKind, TrajectoryRecord> run_scenario(const ScenarioSpec& spec);

// Metrics.

/// Trapezoidal integral of |p(t) - p_ref(t)| over the horizon, p the stacked COM
/// positions, reference interpolated linearly onto the record's grid.
/// Throws std::invalid_argument on a horizon or body-count mismatch.
double integral_consistency_error(const TrajectoryRecord& record,
                                  const TrajectoryRecord& reference);

struct SpreadSeries {
  std::vector<double> time;
  std::vector<double> spread;  ///< N s; 0 where skipped
  std::vector<bool> valid;     ///< false where the step did not have exactly 4 contacts
  double max_over(double t_begin, double t_end) const;
};

/// Per step, max pairwise difference across the 4 contacts of the tangential
/// impulse projected on the world direction `pull`.
SpreadSeries internal_force_spread(const TrajectoryRecord& record,
                                   const Eigen::Vector3d& pull = Eigen::Vector3d::UnitY());

/// Max relative error of the kinetic energy against 1/2 m max(0, v0 - mu 9.81 t)^2
/// over steps with t <= v0 / (mu 9.81) - 2 dt.
double energy_vs_analytic(const TrajectoryRecord& record, double mass, double v0, double mu);

struct ConditioningRow {
  double mass_ratio;
  SolverKind solver;
  double ncp_criterion;       ///< exact contact-law residual
  double model_criterion;     ///< the solver's own stopping quantity
  bool converged;
  int iterations;
};

/// One step of stacked_cubes per ratio with M = 1000, eps = 1e-10.
std::vector<ConditioningRow> conditioning_sweep(const std::vector<double>& mass_ratios,
                                                const std::vector<SolverKind>& solvers);

struct TimingRow {
  SolverKind solver;
  double cold_mean_iterations = 0.0;
  double warm_mean_iterations = 0.0;
  double cold_mean_time = 0.0;  ///< seconds, median of repeats per step
  double warm_mean_time = 0.0;
  int steps = 0;
  int warm_unconverged = 0;
  int cold_unconverged = 0;
};

/// Runs the warm trajectory; on each of its problems also solves cold.
/// Wall times are medians over `repeats` solves; zero when `measure_time` is false.
std::vector<TimingRow> timing_report(const ScenarioSpec& spec, int repeats = 5,
                                     bool measure_time = true);

}  // namespace contactbench

#endif
