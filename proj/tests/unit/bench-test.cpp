#include <cmath>

#include <gtest/gtest.h>

#include "contactbench/bench.hpp"
#include "contactbench/contact-problem.hpp"

namespace cb = contactbench;
using cb::SolverKind;
using Eigen::Vector3d;

namespace {

cb::SolverRun run_of(SolverKind k, double eps = 1e-10, int max_iterations = 10000) {
  return cb::solver_runs({k}, eps, max_iterations).front();
}

// Record of a single body whose position follows `path` on t_k = k dt.
template <class Path>
cb::TrajectoryRecord synthetic(double dt, int steps, Path path) {
  cb::TrajectoryRecord r;
  r.dt = dt;
  r.initial_states.resize(1);
  r.initial_states[0].position = path(0.0);
  for (int k = 1; k <= steps; ++k) {
    cb::StepRecord s;
    s.time = k * dt;
    s.states.resize(1);
    s.states[0].position = path(s.time);
    r.steps.push_back(s);
  }
  return r;
}

}  // namespace

TEST(ConsistencyError, LinearSeparationIntegratesExactly) {
  const auto moving = synthetic(0.01, 100, [](double t) { return Vector3d(0, t, 0); });
  const auto still = synthetic(0.005, 200, [](double) { return Vector3d::Zero(); });
  EXPECT_NEAR(cb::integral_consistency_error(moving, still), 0.5, 1e-12);
  EXPECT_NEAR(cb::integral_consistency_error(still, moving), 0.5, 1e-12);
  EXPECT_EQ(cb::integral_consistency_error(moving, moving), 0.0);
}

TEST(ConsistencyError, InterpolatesFinerReference) {
  // |p - p_ref| = t^2 on the record grid; trapezoid on dt = 0.01 gives 1/3 + dt^2/6.
  const auto ref = synthetic(0.001, 1000, [](double t) { return Vector3d(t * t, 0, 0); });
  const auto rec = synthetic(0.01, 100, [](double) { return Vector3d::Zero(); });
  EXPECT_NEAR(cb::integral_consistency_error(rec, ref), 1.0 / 3.0 + 1e-4 / 6.0, 1e-12);
}

TEST(ConsistencyError, RejectsMismatchedHorizonOrBodies) {
  const auto a = synthetic(0.01, 100, [](double) { return Vector3d::Zero(); });
  const auto b = synthetic(0.01, 50, [](double) { return Vector3d::Zero(); });
  EXPECT_THROW(cb::integral_consistency_error(a, b), std::invalid_argument);
  auto c = a;
  c.initial_states.resize(2);
  EXPECT_THROW(cb::integral_consistency_error(a, c), std::invalid_argument);
}

TEST(ConsistencyError, PseudometricOnTrajectories) {
  const cb::Scene s = cb::sliding_cube_scene(1.0, 0.3);
  const auto a = cb::run_trajectory(s, 0.2, run_of(SolverKind::NcpPgs), true);
  const auto b = cb::run_trajectory(s, 0.2, run_of(SolverKind::CcpPgs), true);
  const auto c = cb::run_trajectory(s, 0.2, run_of(SolverKind::Raisim), true);
  const double ab = cb::integral_consistency_error(a, b);
  const double bc = cb::integral_consistency_error(b, c);
  const double ac = cb::integral_consistency_error(a, c);
  EXPECT_NEAR(ab, cb::integral_consistency_error(b, a), 1e-15);
  EXPECT_LE(ac, ab + bc + 1e-15);
  EXPECT_GE(ab, 0.0);
}

TEST(EnergyVsAnalytic, SyntheticRecords) {
  const double mu = 0.3, v0 = 1.0, g = cb::kGravity;
  auto exact = synthetic(0.001, 1000, [](double) { return Vector3d::Zero(); });
  for (cb::StepRecord& s : exact.steps) {
    s.states[0].linear_velocity.y() = std::max(0.0, v0 - mu * g * s.time);
  }
  EXPECT_LE(cb::energy_vs_analytic(exact, 1.0, v0, mu), 1e-12);
  for (cb::StepRecord& s : exact.steps) s.states[0].linear_velocity *= 1.1;
  EXPECT_NEAR(cb::energy_vs_analytic(exact, 1.0, v0, mu), 0.21, 1e-12);
}

TEST(SlidingCube, NcpFollowsCoulombDeceleration) {
  const cb::Scene s = cb::sliding_cube_scene(1.0, 0.3);
  const auto r = cb::run_trajectory(s, 0.5, run_of(SolverKind::NcpPgs), true);
  ASSERT_FALSE(r.error);
  EXPECT_LE(cb::energy_vs_analytic(r, 1.0, 1.0, 0.3), 1e-6);
}

TEST(SlidingCube, RotatedBasisNcpStaysOnLine) {
  const cb::Scene s = cb::sliding_cube_rotated45_scene();
  const auto r = cb::run_trajectory(s, 1.0, run_of(SolverKind::NcpPgs), true);
  ASSERT_FALSE(r.error);
  for (const cb::StepRecord& st : r.steps) {
    ASSERT_LE(std::abs(st.states[0].position.x()), 1e-6) << "t = " << st.time;
  }
}

TEST(InternalForceSpread, FrictionlessIsZero) {
  cb::Scene s = cb::growing_force_cube_scene(20.0, 0.0);
  const auto r = cb::run_trajectory(s, 0.05, run_of(SolverKind::CcpAdmm), true);
  const cb::SpreadSeries spread = cb::internal_force_spread(r);
  ASSERT_EQ(spread.time.size(), 50u);
  for (size_t k = 0; k < spread.spread.size(); ++k) {
    EXPECT_TRUE(spread.valid[k]);
    EXPECT_EQ(spread.spread[k], 0.0);
  }
}

TEST(InternalForceSpread, StepsWithoutFourContactsAreFlagged) {
  const cb::Scene s = cb::dropped_cube_scene(0.5, 0.0);
  const auto r = cb::run_trajectory(s, 0.05, run_of(SolverKind::NcpPgs), true);
  const cb::SpreadSeries spread = cb::internal_force_spread(r);
  for (size_t k = 0; k < spread.valid.size(); ++k) {
    EXPECT_FALSE(spread.valid[k]);
    EXPECT_EQ(spread.spread[k], 0.0);
  }
  EXPECT_EQ(spread.max_over(0.0, 1.0), 0.0);
}

TEST(InternalForceSpread, HandComputedStep) {
  cb::TrajectoryRecord r;
  cb::StepRecord s;
  s.time = 0.1;
  s.patches.resize(4);
  for (cb::ContactPatch& p : s.patches) {
    p.t1 = Vector3d::UnitY();
    p.t2 = -Vector3d::UnitX();
  }
  s.lambda = Eigen::VectorXd::Zero(12);
  s.lambda(1) = 0.3;
  s.lambda(4) = -0.1;
  s.lambda(8) = 5.0;  // along -x, orthogonal to the pull
  r.steps.push_back(s);
  const cb::SpreadSeries out = cb::internal_force_spread(r);
  EXPECT_NEAR(out.spread[0], 0.4, 1e-15);
  EXPECT_NEAR(out.max_over(0.0, 0.1), 0.4, 1e-15);
  EXPECT_EQ(out.max_over(0.2, 1.0), 0.0);
}

TEST(Timing, HoveringCubeNeedsNoIterations) {
  cb::ScenarioSpec spec;
  spec.name = "hover";
  spec.scene = cb::dropped_cube_scene(5.0, 0.0);
  spec.duration = 0.05;
  spec.solvers = cb::solver_runs({SolverKind::NcpPgs, SolverKind::CcpAdmm}, 1e-8, 1000);
  const auto rows = cb::timing_report(spec, 1, false);
  ASSERT_EQ(rows.size(), 2u);
  for (const cb::TimingRow& row : rows) {
    EXPECT_EQ(row.steps, 50);
    EXPECT_EQ(row.cold_mean_iterations, 0.0);
    EXPECT_EQ(row.warm_mean_iterations, 0.0);
    EXPECT_EQ(row.cold_mean_time, 0.0);
  }
}

TEST(Timing, WarmStartHelpsNcp) {
  cb::ScenarioSpec spec;
  spec.name = "slide";
  spec.scene = cb::sliding_cube_scene(1.0, 0.3);
  spec.duration = 0.2;
  spec.solvers = cb::solver_runs({SolverKind::NcpPgs}, 1e-8, 10000);
  const auto rows = cb::timing_report(spec, 1, false);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_LT(rows[0].warm_mean_iterations, rows[0].cold_mean_iterations);
  EXPECT_EQ(rows[0].warm_unconverged, 0);
}

TEST(RunScenario, DeterministicAndSelfConsistent) {
  cb::ScenarioSpec spec;
  spec.name = "slide";
  spec.scene = cb::sliding_cube_scene(1.0, 0.3);
  spec.duration = 0.1;
  spec.solvers = cb::solver_runs(
      std::vector<SolverKind>(cb::kAllSolvers.begin(), cb::kAllSolvers.end()), 1e-8, 2000);
  spec.keep_problems = true;
  const auto a = cb::run_scenario(spec);
  const auto b = cb::run_scenario(spec);
  ASSERT_EQ(a.size(), 6u);
  for (const auto& [kind, rec] : a) {
    const cb::TrajectoryRecord& other = b.at(kind);
    ASSERT_FALSE(rec.error) << *rec.error;
    ASSERT_EQ(rec.steps.size(), 100u);
    ASSERT_EQ(rec.problems.size(), rec.steps.size());
    for (size_t k = 0; k < rec.steps.size(); ++k) {
      EXPECT_EQ(rec.steps[k].lambda, other.steps[k].lambda) << cb::solver_name(kind);
      EXPECT_EQ(rec.steps[k].states[0].position, other.steps[k].states[0].position);
      const cb::Residuals r = cb::compute_residuals(rec.problems[k], rec.steps[k].lambda);
      EXPECT_NEAR(r.ncp_criterion, rec.steps[k].residuals.ncp_criterion, 1e-12);
    }
  }
}

TEST(RunTrajectory, RecordsErrorsInsteadOfThrowing) {
  cb::Scene s = cb::sliding_cube_scene();
  s.dt = -1.0;
  const auto r = cb::run_trajectory(s, 1.0, run_of(SolverKind::NcpPgs), true);
  EXPECT_TRUE(r.error.has_value());
}

TEST(ScenarioSpec, Validation) {
  cb::ScenarioSpec spec;
  spec.scene = cb::sliding_cube_scene();
  EXPECT_NO_THROW(cb::validate(spec));
  spec.duration = 0.0;
  EXPECT_THROW(cb::validate(spec), std::invalid_argument);
  spec.duration = 1e-4;
  EXPECT_THROW(cb::validate(spec), std::invalid_argument);
  spec.duration = 1.0;
  spec.scene.dt = 0.0;
  EXPECT_THROW(cb::validate(spec), std::invalid_argument);
}

TEST(BuiltinScene, ParsesNamesAndArguments) {
  for (const std::string& id : cb::builtin_scene_ids()) {
    EXPECT_TRUE(cb::builtin_scene(id).has_value()) << id;
  }
  const auto stacked = cb::builtin_scene("stacked_cubes(1e6)");
  ASSERT_TRUE(stacked);
  ASSERT_EQ(stacked->bodies.size(), 2u);
  EXPECT_NEAR(stacked->bodies[1].mass / stacked->bodies[0].mass, 1e6, 1e-6);
  const auto dropped = cb::builtin_scene("dropped_cube(0.25, 0.5)");
  ASSERT_TRUE(dropped);
  EXPECT_NEAR(dropped->initial_states[0].position.z(), 0.75, 1e-15);
  EXPECT_EQ(dropped->restitution, 0.5);
  EXPECT_FALSE(cb::builtin_scene("no_such_scene").has_value());
  EXPECT_THROW(cb::builtin_scene("stacked_cubes(abc)"), std::invalid_argument);
  EXPECT_THROW(cb::builtin_scene("stacked_cubes(1e6"), std::invalid_argument);
}

TEST(BuiltinScene, InitialStatesRest) {
  const cb::Scene s = cb::sliding_cube_scene(2.0, 0.4);
  EXPECT_EQ(s.mu, 0.4);
  EXPECT_EQ(s.initial_states[0].linear_velocity, Vector3d(0, 2.0, 0));
  EXPECT_NEAR(s.initial_states[0].position.z(), 0.5, 1e-15);
  EXPECT_NEAR(cb::sliding_cube_rotated45_scene().tangent_rotation, M_PI / 4.0, 1e-15);
}

TEST(ConditioningSweep, RowsPerRatioAndSolver) {
  const auto rows = cb::conditioning_sweep({1.0, 1e3}, {SolverKind::CcpAdmm, SolverKind::NcpPgs});
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].mass_ratio, 1.0);
  EXPECT_EQ(rows[0].solver, SolverKind::CcpAdmm);
  EXPECT_EQ(rows[3].mass_ratio, 1e3);
  for (const cb::ConditioningRow& r : rows) {
    EXPECT_GE(r.ncp_criterion, 0.0);
    EXPECT_LE(r.iterations, 1000);
  }
  EXPECT_LE(rows[0].ncp_criterion, 1e-6);
}
