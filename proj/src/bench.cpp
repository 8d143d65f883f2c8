#include "contactbench/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace contactbench {

namespace {

Scene single_cube(double mass) {
  Scene scene;
  scene.bodies.push_back(BodyModel::box(mass, Eigen::Vector3d::Constant(0.5)));
  RigidBodyState s;
  s.position = Eigen::Vector3d(0.0, 0.0, 0.5);
  scene.initial_states.push_back(s);
  return scene;
}

double model_criterion(SolverKind kind, const ContactProblem& problem,
                       const ContactSolution& sol) {
  switch (kind) {
    case SolverKind::CcpPgs:
    case SolverKind::CcpAdmm:
      return ccp_stationarity(problem, sol.lambda);
    case SolverKind::LcpPgs:
      return compute_pyramid_residuals(problem, sol.lambda).ncp_criterion;
    case SolverKind::Raisim:
      return sol.stopping_criterion;
    case SolverKind::NcpPgs:
    case SolverKind::Staggered:
      return sol.residuals.ncp_criterion;
  }
  return sol.stopping_criterion;
}

Eigen::VectorXd com_positions(const std::vector<RigidBodyState>& states) {
  Eigen::VectorXd p(3 * static_cast<Eigen::Index>(states.size()));
  for (size_t b = 0; b < states.size(); ++b) p.segment<3>(static_cast<Eigen::Index>(3 * b)) = states[b].position;
  return p;
}

// COM positions on the grid t = 0, dt, ..., including the initial state.
std::vector<Eigen::VectorXd> position_series(const TrajectoryRecord& r) {
  std::vector<Eigen::VectorXd> out;
  out.push_back(com_positions(r.initial_states));
  for (const StepRecord& s : r.steps) out.push_back(com_positions(s.states));
  return out;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

Scene sliding_cube_scene(double v0, double mu, double tangent_rotation) {
  Scene scene = single_cube(1.0);
  scene.mu = mu;
  scene.initial_states[0].linear_velocity = Eigen::Vector3d(0.0, v0, 0.0);
  scene.tangent_rotation = tangent_rotation;
  return scene;
}

Scene sliding_cube_rotated45_scene() {
  return sliding_cube_scene(1.0, 0.3, std::numbers::pi / 4.0);
}

Scene growing_force_cube_scene(double rate, double mu) {
  Scene scene = single_cube(1.0);
  scene.mu = mu;
  ExternalWrench pull;
  pull.body = 0;
  pull.start = 0.0;
  pull.end = 1e9;
  pull.wrench_rate(1) = rate;
  scene.forces.push_back(pull);
  return scene;
}

Scene stacked_cubes_scene(double mass_ratio) {
  if (!(mass_ratio > 0.0)) throw std::invalid_argument("mass_ratio must be > 0");
  const double root = std::sqrt(mass_ratio);
  Scene scene = single_cube(1.0 / root);
  scene.mu = 0.5;
  scene.bodies.push_back(BodyModel::box(root, Eigen::Vector3d::Constant(0.25)));
  RigidBodyState top;
  top.position = Eigen::Vector3d(0.0, 0.0, 1.25);
  scene.initial_states.push_back(top);
  return scene;
}

Scene dropped_cube_scene(double height, double restitution) {
  Scene scene = single_cube(1.0);
  scene.restitution = restitution;
  scene.initial_states[0].position.z() = 0.5 + height;
  return scene;
}

Scene compliant_rest_scene(double compliance) {
  Scene scene = single_cube(1.0);
  scene.compliance = compliance;
  scene.tangential_compliance = compliance;
  scene.baumgarte = 0.0;
  return scene;
}

const std::vector<std::string>& builtin_scene_ids() {
  static const std::vector<std::string> ids{"sliding_cube",       "sliding_cube_rotated45",
                                            "growing_force_cube", "stacked_cubes",
                                            "dropped_cube",       "compliant_rest"};
  return ids;
}

std::optional<Scene> builtin_scene(const std::string& id) {
  const size_t open = id.find('(');
  const std::string name = id.substr(0, open);
  std::vector<double> args;
  if (open != std::string::npos) {
    if (id.back() != ')') throw std::invalid_argument(id + ": missing ')'");
    std::stringstream ss(id.substr(open + 1, id.size() - open - 2));
    for (std::string tok; std::getline(ss, tok, ',');) {
      size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || tok.find_first_not_of(" \t", used) != std::string::npos) {
        throw std::invalid_argument(id + ": bad argument '" + tok + "'");
      }
      args.push_back(v);
    }
  }
  auto arity = [&](size_t lo, size_t hi) {
    if (args.size() < lo || args.size() > hi) {
      throw std::invalid_argument(id + ": expected " + std::to_string(lo) + " to " +
                                  std::to_string(hi) + " arguments");
    }
  };
  auto arg = [&](size_t i, double fallback) { return i < args.size() ? args[i] : fallback; };
  if (name == "sliding_cube") {
    arity(0, 2);
    return sliding_cube_scene(arg(0, 1.0), arg(1, 0.3));
  }
  if (name == "sliding_cube_rotated45") {
    arity(0, 0);
    return sliding_cube_rotated45_scene();
  }
  if (name == "growing_force_cube") {
    arity(0, 2);
    return growing_force_cube_scene(arg(0, 20.0), arg(1, 0.5));
  }
  if (name == "stacked_cubes") {
    arity(0, 1);
    return stacked_cubes_scene(arg(0, 1e6));
  }
  if (name == "dropped_cube") {
    arity(0, 2);
    return dropped_cube_scene(arg(0, 0.5), arg(1, 0.5));
  }
  if (name == "compliant_rest") {
    arity(0, 1);
    return compliant_rest_scene(arg(0, 1e-2));
  }
  return std::nullopt;
}

void validate(const ScenarioSpec& spec) {
  if (!(spec.duration > 0.0)) throw std::invalid_argument("duration must be > 0");
  if (!(spec.scene.dt > 0.0)) throw std::invalid_argument("dt must be > 0");
  if (spec.scene.dt > spec.duration) throw std::invalid_argument("dt must not exceed duration");
  validate(spec.scene);
}

std::vector<SolverRun> solver_runs(const std::vector<SolverKind>& kinds, double eps,
                                   int max_iterations) {
  std::vector<SolverRun> runs;
  for (SolverKind k : kinds) {
    SolverConfig c = default_config(k);
    c.eps_abs = eps;
    if (k != SolverKind::Staggered) c.max_iterations = max_iterations;
    runs.push_back({k, c});
  }
  return runs;
}

TrajectoryRecord run_trajectory(const Scene& scene, double duration, const SolverRun& run,
                                bool warm, bool keep_problems, const std::string& scenario) {
  TrajectoryRecord rec;
  rec.scenario = scenario;
  rec.solver = run.kind;
  rec.dt = scene.dt;
  rec.initial_states = scene.initial_states;
  rec.initial_energy = mechanical_energy(scene, scene.initial_states);
  const long steps = std::lround(duration / scene.dt);
  rec.steps.reserve(static_cast<size_t>(std::max(0L, steps)));
  std::vector<RigidBodyState> states = scene.initial_states;
  WarmCache cache;
  try {
    validate(scene);
    for (long k = 0; k < steps; ++k) {
      const double t = static_cast<double>(k) * scene.dt;
      StepResult r = step_scene(scene, states, t, run.kind, run.config, warm ? &cache : nullptr);
      StepRecord s;
      s.time = static_cast<double>(k + 1) * scene.dt;
      s.states = r.states;
      s.patches = std::move(r.patches);
      s.lambda = r.solution.lambda;
      s.residuals = r.solution.residuals;
      s.stopping_criterion = r.solution.stopping_criterion;
      s.energy = mechanical_energy(scene, r.states);
      s.iterations = r.solution.iterations;
      s.converged = r.solution.converged;
      s.solve_time = r.solution.solve_time;
      s.branches = r.solution.trace.branches;
      rec.steps.push_back(std::move(s));
      if (keep_problems) rec.problems.push_back(r.problem);
      states = std::move(r.states);
      cache = std::move(r.cache);
    }
  } catch (const std::exception& e) {
    rec.error = e.what();
  }
  return rec;
}

std::map<SolverKind, TrajectoryRecord> run_scenario(const ScenarioSpec& spec) {
  validate(spec);
  std::map<SolverKind, TrajectoryRecord> out;
  for (const SolverRun& run : spec.solvers) {
    out[run.kind] =
        run_trajectory(spec.scene, spec.duration, run, spec.warm, spec.keep_problems, spec.name);
  }
  return out;
}

double integral_consistency_error(const TrajectoryRecord& record,
                                  const TrajectoryRecord& reference) {
  const double T = record.dt * static_cast<double>(record.steps.size());
  const double T_ref = reference.dt * static_cast<double>(reference.steps.size());
  if (std::abs(T - T_ref) > 1e-9 * std::max(1.0, T)) {
    throw std::invalid_argument("consistency error: horizons differ");
  }
  if (record.initial_states.size() != reference.initial_states.size()) {
    throw std::invalid_argument("consistency error: body counts differ");
  }
  const std::vector<Eigen::VectorXd> p = position_series(record);
  const std::vector<Eigen::VectorXd> q = position_series(reference);
  const auto last = static_cast<double>(q.size() - 1);
  const double ratio = record.dt / reference.dt;  // exactly 1 on a shared grid
  std::vector<double> err(p.size());
  for (size_t k = 0; k < p.size(); ++k) {
    const double x = std::min(static_cast<double>(k) * ratio, last);
    const auto j = static_cast<size_t>(std::min(std::floor(x), std::max(0.0, last - 1.0)));
    const double w = q.size() > 1 ? x - static_cast<double>(j) : 0.0;
    const Eigen::VectorXd ref = q.size() > 1 ? Eigen::VectorXd((1.0 - w) * q[j] + w * q[j + 1]) : q[0];
    err[k] = (p[k] - ref).norm();
  }
  double total = 0.0;
  for (size_t k = 1; k < err.size(); ++k) total += 0.5 * record.dt * (err[k - 1] + err[k]);
  return total;
}

double SpreadSeries::max_over(double t_begin, double t_end) const {
  double m = 0.0;
  for (size_t k = 0; k < time.size(); ++k) {
    if (valid[k] && time[k] >= t_begin && time[k] <= t_end) m = std::max(m, spread[k]);
  }
  return m;
}

SpreadSeries internal_force_spread(const TrajectoryRecord& record, const Eigen::Vector3d& pull) {
  SpreadSeries out;
  for (const StepRecord& s : record.steps) {
    out.time.push_back(s.time);
    if (s.patches.size() != 4) {
      out.spread.push_back(0.0);
      out.valid.push_back(false);
      continue;
    }
    double lo = 0.0, hi = 0.0;
    for (size_t i = 0; i < 4; ++i) {
      const ContactPatch& p = s.patches[i];
      const auto o = static_cast<Eigen::Index>(3 * i);
      const double f = (s.lambda(o + 1) * p.t1 + s.lambda(o + 2) * p.t2).dot(pull);
      lo = i == 0 ? f : std::min(lo, f);
      hi = i == 0 ? f : std::max(hi, f);
    }
    out.spread.push_back(hi - lo);
    out.valid.push_back(true);
  }
  return out;
}

double energy_vs_analytic(const TrajectoryRecord& record, double mass, double v0, double mu) {
  const double t_stop = v0 / (mu * kGravity);
  double worst = 0.0;
  for (const StepRecord& s : record.steps) {
    if (s.time > t_stop - 2.0 * record.dt) break;
    const double v = std::max(0.0, v0 - mu * kGravity * s.time);
    const double analytic = 0.5 * mass * v * v;
    const RigidBodyState& st = s.states.front();
    const double kinetic = 0.5 * mass * st.linear_velocity.squaredNorm();
    worst = std::max(worst, std::abs(kinetic - analytic) / analytic);
  }
  return worst;
}

std::vector<ConditioningRow> conditioning_sweep(const std::vector<double>& mass_ratios,
                                                const std::vector<SolverKind>& solvers) {
  std::vector<ConditioningRow> rows;
  for (double ratio : mass_ratios) {
    const Scene scene = stacked_cubes_scene(ratio);
    for (SolverKind k : solvers) {
      SolverConfig c = default_config(k);
      c.max_iterations = 1000;
      c.eps_abs = 1e-10;
      StepResult r = step_scene(scene, scene.initial_states, 0.0, k, c, nullptr);
      rows.push_back({ratio, k, r.solution.residuals.ncp_criterion,
                      model_criterion(k, r.problem, r.solution), r.solution.converged,
                      r.solution.iterations});
    }
  }
  return rows;
}

std::vector<TimingRow> timing_report(const ScenarioSpec& spec, int repeats, bool measure_time) {
  validate(spec);
  std::vector<TimingRow> rows;
  for (const SolverRun& run : spec.solvers) {
    TimingRow row;
    row.solver = run.kind;
    std::vector<RigidBodyState> states = spec.scene.initial_states;
    WarmCache cache;
    const long steps = std::lround(spec.duration / spec.scene.dt);
    double cold_iters = 0.0, warm_iters = 0.0, cold_time = 0.0, warm_time = 0.0;
    for (long k = 0; k < steps; ++k) {
      const double t = static_cast<double>(k) * spec.scene.dt;
      PreparedStep prepared = prepare_step(spec.scene, states, t, &cache);
      SolverConfig warm_cfg = run.config;
      warm_cfg.warm_start = prepared.warm_start;
      SolverConfig cold_cfg = run.config;
      cold_cfg.warm_start.reset();
      const ContactProblem& problem = prepared.problem;

      ContactSolution warm = solve(run.kind, problem, warm_cfg);
      const ContactSolution cold = solve(run.kind, problem, cold_cfg);
      warm_iters += warm.iterations;
      cold_iters += cold.iterations;
      if (!warm.converged) ++row.warm_unconverged;
      if (!cold.converged) ++row.cold_unconverged;
      if (measure_time && problem.num_contacts() > 0) {
        std::vector<double> tw{warm.solve_time}, tc{cold.solve_time};
        for (int r = 1; r < repeats; ++r) {
          tw.push_back(solve(run.kind, problem, warm_cfg).solve_time);
          tc.push_back(solve(run.kind, problem, cold_cfg).solve_time);
        }
        warm_time += median(tw);
        cold_time += median(tc);
      }
      // The warm solve defines the trajectory for both modes.
      StepResult next = complete_step(spec.scene, states, std::move(prepared), std::move(warm));
      states = std::move(next.states);
      cache = std::move(next.cache);
      ++row.steps;
    }
    if (row.steps > 0) {
      const double n = row.steps;
      row.cold_mean_iterations = cold_iters / n;
      row.warm_mean_iterations = warm_iters / n;
      row.cold_mean_time = cold_time / n;
      row.warm_mean_time = warm_time / n;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace contactbench
