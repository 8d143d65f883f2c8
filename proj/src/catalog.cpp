#include "contactbench/catalog.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>

#include "contactbench/errors.hpp"
#include "contactbench/generators.hpp"

namespace contactbench {
namespace {

namespace fs = std::filesystem;

constexpr double kEps = 1e-10;
constexpr int kMaxIterations = 10000;
constexpr int kStaggeredOuter = 50;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

SolverRun physics_run(SolverKind kind, double eps = kEps) {
  SolverConfig c = default_config(kind);
  c.eps_abs = eps;
  c.max_iterations = kind == SolverKind::Staggered ? kStaggeredOuter : kMaxIterations;
  return {kind, c};
}

struct Job {
  std::string file;
  std::vector<std::pair<std::string, std::string>> metadata;
  std::function<TrajectoryRecord()> run;
};

/// Runs jobs on up to `threads` workers; results keep the job order.
std::vector<TrajectoryRecord> run_jobs(const std::vector<Job>& jobs, unsigned threads) {
  std::vector<TrajectoryRecord> out(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < jobs.size(); i = next++) {
      try {
        out[i] = jobs[i].run();
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto n = static_cast<unsigned>(
      std::max<size_t>(1, std::min<size_t>(std::max(1u, threads), jobs.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

class Output {
 public:
  Output(const std::optional<fs::path>& root, const std::string& name, const CatalogOptions& o)
      : options_(o) {
    if (root) {
      dir_ = *root / name;
      fs::create_directories(*dir_);
    }
  }

  void trajectory(const Job& job, const TrajectoryRecord& record) const {
    if (!dir_) return;
    CsvOptions csv;
    csv.deterministic_timing = options_.deterministic_timing;
    csv.metadata = job.metadata;
    std::ofstream f = open(job.file);
    write_trajectory_csv(f, record, csv);
  }

  void table(const std::string& file, const std::string& name, const std::string& header,
             const std::vector<std::string>& rows) const {
    if (!dir_) return;
    std::ofstream f = open(file);
    f << "# contactbench-csv v1\n# table: " << name << "\n" << header << "\n";
    for (const std::string& r : rows) f << r << "\n";
  }

  void summary(const Json& j) const {
    if (!dir_) return;
    std::ofstream f = open("summary.json");
    f << j.dump(2) << "\n";
  }

 private:
  std::ofstream open(const std::string& file) const {
    std::ofstream f(*dir_ / file);
    if (!f) throw std::runtime_error("cannot write " + (*dir_ / file).string());
    return f;
  }

  CatalogOptions options_;
  std::optional<fs::path> dir_;
};

std::string file_for(SolverKind k, const std::string& suffix = {}) {
  return std::string(solver_name(k)) + suffix + ".csv";
}

/// NaN becomes JSON null, which keeps summary.json valid.
Json num(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json record_status(const TrajectoryRecord& r) {
  Json j;
  j["steps"] = r.steps.size();
  j["error"] = r.error ? Json(*r.error) : Json(nullptr);
  double iters = 0.0;
  int unconverged = 0;
  for (const StepRecord& s : r.steps) {
    iters += s.iterations;
    unconverged += s.converged ? 0 : 1;
  }
  j["mean_iterations"] = num(r.steps.empty() ? kNaN : iters / static_cast<double>(r.steps.size()));
  j["unconverged_steps"] = unconverged;
  return j;
}

double final_coordinate(const TrajectoryRecord& r, int axis, size_t body = 0) {
  if (r.error || r.steps.empty()) return kNaN;
  return r.steps.back().states[body].position(axis);
}

std::vector<Job> solver_jobs(const Scene& scene, double duration, const std::string& scenario,
                             bool keep_problems = false, double eps = kEps) {
  std::vector<Job> jobs;
  for (SolverKind k : kAllSolvers) {
    jobs.push_back({file_for(k), {}, [=] {
                      return run_trajectory(scene, duration, physics_run(k, eps), true,
                                            keep_problems, scenario);
                    }});
  }
  return jobs;
}

void write_all(const Output& out, const std::vector<Job>& jobs,
               const std::vector<TrajectoryRecord>& recs) {
  for (size_t i = 0; i < jobs.size(); ++i) out.trajectory(jobs[i], recs[i]);
}

// Signorini and complementarity diagnostics over steps where the cube slides.
struct SlidingDiagnostics {
  double max_eps_c = 0.0;
  double max_ccp_complementarity = 0.0;
  double max_active_normal_velocity = 0.0;
  int steps = 0;
};

SlidingDiagnostics sliding_diagnostics(const TrajectoryRecord& r, double eps) {
  SlidingDiagnostics d;
  for (size_t k = 0; k < r.steps.size() && k < r.problems.size(); ++k) {
    const StepRecord& s = r.steps[k];
    if (s.patches.empty() || s.states[0].linear_velocity.head<2>().norm() <= 1e-3) continue;
    ++d.steps;
    const ContactProblem& p = r.problems[k];
    d.max_eps_c = std::max(d.max_eps_c, s.residuals.complementarity.maxCoeff());
    d.max_ccp_complementarity =
        std::max(d.max_ccp_complementarity, ccp_complementarity(p, s.lambda).cwiseAbs().maxCoeff());
    const Eigen::VectorXd c = p.contact_velocity(s.lambda);
    for (int i = 0; i < p.num_contacts(); ++i) {
      if (s.lambda(3 * i) > eps) {
        d.max_active_normal_velocity = std::max(d.max_active_normal_velocity, std::abs(c(3 * i)));
      }
    }
  }
  return d;
}

Json sliding_cube(const Output& out, const CatalogOptions& o) {
  const double v0 = 1.0, mu = 0.3;
  std::vector<Job> jobs = solver_jobs(sliding_cube_scene(v0, mu), 1.0, "sliding_cube", true);
  // Large inertia suppresses the normal-tangential coupling of the corner contacts.
  Scene decoupled = sliding_cube_scene(v0, mu);
  decoupled.bodies[0].inertia *= 1e3;
  jobs.push_back({"raisim_coupling_free.csv",
                  {{"variant", "inertia x 1e3"}},
                  [=] {
                    return run_trajectory(decoupled, 1.0, physics_run(SolverKind::Raisim), true,
                                          false, "sliding_cube");
                  }});
  std::vector<TrajectoryRecord> recs = run_jobs(jobs, o.threads);
  write_all(out, jobs, recs);

  Json solvers;
  for (size_t i = 0; i < kAllSolvers.size(); ++i) {
    const TrajectoryRecord& r = recs[i];
    Json j = record_status(r);
    j["x_final"] = num(final_coordinate(r, 0));
    j["y_final"] = num(final_coordinate(r, 1));
    double max_x = 0.0, max_z = 0.0;
    for (const StepRecord& s : r.steps) {
      max_x = std::max(max_x, std::abs(s.states[0].position.x()));
      max_z = std::max(max_z, std::abs(s.states[0].position.z() - 0.5));
    }
    j["max_abs_x"] = max_x;
    j["max_abs_z_offset"] = max_z;
    j["energy_relative_error"] = num(energy_vs_analytic(r, 1.0, v0, mu));
    const SlidingDiagnostics d = sliding_diagnostics(r, kEps);
    j["sliding_steps"] = d.steps;
    j["max_eps_c_sliding"] = d.max_eps_c;
    j["max_ccp_complementarity_sliding"] = d.max_ccp_complementarity;
    j["max_active_normal_velocity_sliding"] = d.max_active_normal_velocity;
    solvers[std::string(solver_name(r.solver))] = j;
  }
  Json j;
  j["scenario"] = "sliding_cube";
  j["parameters"] = {{"v0", v0}, {"mu", mu}, {"mass", 1.0}, {"dt", 1e-3}, {"duration", 1.0},
                     {"eps", kEps}, {"gravity", kGravity}};
  j["analytic_stop_distance"] = v0 * v0 / (2.0 * mu * kGravity);
  j["solvers"] = solvers;
  Json cf = record_status(recs.back());
  cf["energy_relative_error"] = num(energy_vs_analytic(recs.back(), 1.0, v0, mu));
  j["raisim_coupling_free"] = cf;
  return j;
}

Json sliding_cube_rotated45(const Output& out, const CatalogOptions& o) {
  std::vector<Job> jobs =
      solver_jobs(sliding_cube_rotated45_scene(), 1.0, "sliding_cube_rotated45");
  const double angle30 = std::numbers::pi / 6.0;
  for (SolverKind k : {SolverKind::LcpPgs, SolverKind::NcpPgs}) {
    jobs.push_back({file_for(k, "_rot30"), {{"tangent_rotation", "pi/6"}}, [=] {
                      return run_trajectory(sliding_cube_scene(1.0, 0.3, angle30), 1.0,
                                            physics_run(k), true, false, "sliding_cube_rotated45");
                    }});
  }
  std::vector<TrajectoryRecord> recs = run_jobs(jobs, o.threads);
  write_all(out, jobs, recs);

  Json solvers;
  for (size_t i = 0; i < kAllSolvers.size(); ++i) {
    Json j = record_status(recs[i]);
    j["x_final"] = num(final_coordinate(recs[i], 0));
    j["y_final"] = num(final_coordinate(recs[i], 1));
    solvers[std::string(solver_name(recs[i].solver))] = j;
  }
  const double lcp = std::abs(final_coordinate(recs[0], 0));
  const double ncp = std::abs(final_coordinate(recs[4], 0));
  const size_t n = kAllSolvers.size();
  Json j;
  j["scenario"] = "sliding_cube_rotated45";
  j["parameters"] = {{"v0", 1.0}, {"mu", 0.3}, {"tangent_rotation_deg", 45.0}, {"dt", 1e-3},
                     {"duration", 1.0}, {"eps", kEps}};
  j["solvers"] = solvers;
  j["lcp_abs_x"] = num(lcp);
  j["ncp_abs_x"] = num(ncp);
  j["lcp_over_ncp_abs_x"] = num(lcp / ncp);
  j["rotation_30deg"] = {{"lcp_abs_x", num(std::abs(final_coordinate(recs[n], 0)))},
                         {"ncp_abs_x", num(std::abs(final_coordinate(recs[n + 1], 0)))}};
  return j;
}

/// Steps before the first one whose body speed along `pull` exceeds 1e-6 m/s.
double stiction_end(const TrajectoryRecord& r) {
  for (const StepRecord& s : r.steps) {
    if (std::abs(s.states[0].linear_velocity.y()) > 1e-6) return s.time - 0.5 * r.dt;
  }
  return r.steps.empty() ? 0.0 : r.steps.back().time;
}

Json growing_force_cube(const Output& out, const CatalogOptions& o) {
  const double rate = 20.0, mu = 0.5, duration = 0.3;
  std::vector<Job> jobs =
      solver_jobs(growing_force_cube_scene(rate, mu), duration, "growing_force_cube");
  jobs.push_back({file_for(SolverKind::NcpPgs, "_frictionless"), {{"mu", "0"}}, [=] {
                    return run_trajectory(growing_force_cube_scene(rate, 0.0), duration,
                                          physics_run(SolverKind::NcpPgs), true, false,
                                          "growing_force_cube");
                  }});
  std::vector<TrajectoryRecord> recs = run_jobs(jobs, o.threads);
  write_all(out, jobs, recs);

  // Above this force the back corners need more than their friction share for an equal split.
  const double h = 0.5, w = 0.5;
  const double t_sym = mu * kGravity / (1.0 + mu * h / w) / rate;
  Json solvers;
  for (size_t i = 0; i < kAllSolvers.size(); ++i) {
    const TrajectoryRecord& r = recs[i];
    const SpreadSeries sp = internal_force_spread(r);
    const double t_end = stiction_end(r);
    Json j = record_status(r);
    j["stiction_end"] = t_end;
    j["max_spread_stiction"] = sp.max_over(0.0, t_end);
    j["max_spread_equal_split_window"] = sp.max_over(0.0, t_sym);
    j["invalid_steps"] = std::count(sp.valid.begin(), sp.valid.end(), false);
    solvers[std::string(solver_name(r.solver))] = j;
  }
  const SpreadSeries frictionless = internal_force_spread(recs.back());
  Json j;
  j["scenario"] = "growing_force_cube";
  j["parameters"] = {{"force_rate", rate}, {"mu", mu}, {"mass", 1.0}, {"dt", 1e-3},
                     {"duration", duration}, {"eps", kEps}};
  j["analytic_slide_onset"] = mu * kGravity / rate;
  j["equal_split_limit"] = t_sym;
  j["solvers"] = solvers;
  j["frictionless_max_spread"] = frictionless.max_over(0.0, duration);
  return j;
}

Json stacked_cubes(const Output& out, const CatalogOptions& o) {
  const std::vector<double> ratios{1.0, 1e2, 1e4, 1e6};
  const std::vector<ConditioningRow> rows = conditioning_sweep(
      ratios, std::vector<SolverKind>(kAllSolvers.begin(), kAllSolvers.end()));
  std::vector<std::string> lines;
  Json table = Json::array();
  for (const ConditioningRow& r : rows) {
    lines.push_back(format_double(r.mass_ratio) + "," + std::string(solver_name(r.solver)) + "," +
                    format_double(r.ncp_criterion) + "," + format_double(r.model_criterion) + "," +
                    (r.converged ? "1" : "0") + "," + std::to_string(r.iterations));
    table.push_back({{"mass_ratio", r.mass_ratio},
                     {"solver", solver_name(r.solver)},
                     {"ncp_criterion", num(r.ncp_criterion)},
                     {"model_criterion", num(r.model_criterion)},
                     {"converged", r.converged},
                     {"iterations", r.iterations}});
  }
  out.table("conditioning.csv", "conditioning",
            "mass_ratio,solver,ncp_criterion,model_criterion,converged,iterations", lines);

  // Short trajectories at the hardest ratio under the same fixed budget.
  const Scene scene = stacked_cubes_scene(1e6);
  std::vector<Job> jobs;
  for (SolverKind k : kAllSolvers) {
    jobs.push_back({file_for(k), {{"mass_ratio", "1e6"}}, [=] {
                      SolverConfig c = default_config(k);
                      c.max_iterations = 1000;
                      c.eps_abs = kEps;
                      return run_trajectory(scene, 0.05, {k, c}, true, false, "stacked_cubes");
                    }});
  }
  std::vector<TrajectoryRecord> recs = run_jobs(jobs, o.threads);
  write_all(out, jobs, recs);
  Json solvers;
  for (const TrajectoryRecord& r : recs) {
    Json j = record_status(r);
    j["upper_z_drop"] = num(1.25 - final_coordinate(r, 2, 1));
    solvers[std::string(solver_name(r.solver))] = j;
  }
  Json j;
  j["scenario"] = "stacked_cubes";
  j["parameters"] = {{"mass_ratios", ratios}, {"max_iterations", 1000}, {"eps", kEps},
                     {"trajectory_mass_ratio", 1e6}, {"trajectory_duration", 0.05}};
  j["conditioning"] = table;
  j["trajectories"] = solvers;
  return j;
}

Json dropped_cube(const Output& out, const CatalogOptions& o) {
  const double height = 0.5, e = 0.5;
  std::vector<Job> jobs = solver_jobs(dropped_cube_scene(height, e), 1.0, "dropped_cube");
  std::vector<TrajectoryRecord> recs = run_jobs(jobs, o.threads);
  write_all(out, jobs, recs);
  Json solvers;
  for (const TrajectoryRecord& r : recs) {
    Json j = record_status(r);
    double penetration = 0.0, apex = kNaN;
    bool touched = false;
    for (const StepRecord& s : r.steps) {
      const double z = s.states[0].position.z();
      penetration = std::max(penetration, 0.5 - z);
      if (!s.patches.empty()) touched = true;
      if (touched && s.states[0].linear_velocity.z() > 0.0) {
        apex = std::isnan(apex) ? z : std::max(apex, z);
      }
    }
    j["max_penetration"] = penetration;
    j["rebound_apex_z"] = num(apex);
    solvers[std::string(solver_name(r.solver))] = j;
  }
  Json j;
  j["scenario"] = "dropped_cube";
  j["parameters"] = {{"height", height}, {"restitution", e}, {"dt", 1e-3}, {"duration", 1.0},
                     {"eps", kEps}};
  j["analytic_rebound_apex_z"] = 0.5 + e * e * height;
  j["solvers"] = solvers;
  return j;
}

Json compliant_rest(const Output& out, const CatalogOptions& o) {
  const double R = 1e-2, duration = 1.0, dt = 1e-3;
  std::vector<Job> jobs = solver_jobs(compliant_rest_scene(R), duration, "compliant_rest");
  std::vector<TrajectoryRecord> recs = run_jobs(jobs, o.threads);
  write_all(out, jobs, recs);
  Json solvers;
  for (const TrajectoryRecord& r : recs) {
    Json j = record_status(r);
    j["z_drop"] = num(0.5 - final_coordinate(r, 2));
    j["max_spread"] = internal_force_spread(r, Eigen::Vector3d::UnitX()).max_over(0.0, duration);
    solvers[std::string(solver_name(r.solver))] = j;
  }
  Json j;
  j["scenario"] = "compliant_rest";
  j["parameters"] = {{"compliance", R}, {"dt", dt}, {"duration", duration}, {"eps", kEps}};
  // Each corner carries m g dt / 4 and moves at -R times that.
  j["predicted_z_drop"] = R * kGravity * dt / 4.0 * duration;
  j["solvers"] = solvers;
  return j;
}

const std::vector<SolverKind> kConsistencySolvers{SolverKind::NcpPgs, SolverKind::CcpPgs,
                                                  SolverKind::Raisim};

Json dt_consistency(const Output& out, const CatalogOptions& o) {
  const std::vector<double> dts{1e-4, 1e-3, 1e-2};
  const std::vector<std::string> tags{"_dt0.1ms", "_dt1ms", "_dt10ms"};
  std::vector<Job> jobs;
  for (SolverKind k : kConsistencySolvers) {
    for (size_t d = 0; d < dts.size(); ++d) {
      Scene scene = sliding_cube_scene();
      scene.dt = dts[d];
      jobs.push_back({file_for(k, tags[d]), {{"role", d == 0 ? "reference" : "candidate"}}, [=] {
                        return run_trajectory(scene, 1.0, physics_run(k, 1e-9), true, false,
                                              "dt_consistency");
                      }});
    }
  }
  std::vector<TrajectoryRecord> recs = run_jobs(jobs, o.threads);
  write_all(out, jobs, recs);
  Json solvers;
  for (size_t s = 0; s < kConsistencySolvers.size(); ++s) {
    const TrajectoryRecord& ref = recs[3 * s];
    const double e1 = integral_consistency_error(recs[3 * s + 1], ref);
    const double e10 = integral_consistency_error(recs[3 * s + 2], ref);
    solvers[std::string(solver_name(kConsistencySolvers[s]))] = {
        {"error_1ms", e1}, {"error_10ms", e10}, {"ratio_10ms_over_1ms", num(e10 / e1)}};
  }
  Json j;
  j["scenario"] = "dt_consistency";
  j["parameters"] = {{"reference_dt", 1e-4}, {"dts", {1e-3, 1e-2}}, {"eps", 1e-9},
                     {"duration", 1.0}, {"integrand", "com_position"}};
  j["solvers"] = solvers;
  return j;
}

Json eps_consistency(const Output& out, const CatalogOptions& o) {
  const std::vector<double> epss{1e-9, 1e-2, 1e-4, 1e-6};
  const std::vector<std::string> tags{"_eps1e-9", "_eps1e-2", "_eps1e-4", "_eps1e-6"};
  const std::vector<SolverKind> kinds{SolverKind::NcpPgs, SolverKind::CcpPgs, SolverKind::Raisim,
                                      SolverKind::CcpAdmm};
  std::vector<Job> jobs;
  for (SolverKind k : kinds) {
    for (size_t e = 0; e < epss.size(); ++e) {
      jobs.push_back({file_for(k, tags[e]), {{"role", e == 0 ? "reference" : "candidate"}}, [=] {
                        return run_trajectory(sliding_cube_scene(), 1.0, physics_run(k, epss[e]),
                                              true, false, "eps_consistency");
                      }});
    }
  }
  std::vector<TrajectoryRecord> recs = run_jobs(jobs, o.threads);
  write_all(out, jobs, recs);
  Json solvers;
  for (size_t s = 0; s < kinds.size(); ++s) {
    const TrajectoryRecord& ref = recs[4 * s];
    Json j;
    for (size_t e = 1; e < epss.size(); ++e) {
      j["error" + tags[e]] = integral_consistency_error(recs[4 * s + e], ref);
    }
    solvers[std::string(solver_name(kinds[s]))] = j;
  }
  Json j;
  j["scenario"] = "eps_consistency";
  j["parameters"] = {{"reference_eps", 1e-9}, {"eps", {1e-2, 1e-4, 1e-6}}, {"dt", 1e-3},
                     {"duration", 1.0}, {"integrand", "com_position"}};
  j["solvers"] = solvers;
  j["ncp_over_ccp_at_1e-2"] =
      num(solvers["ncp-pgs"]["error_eps1e-2"].get<double>() /
          solvers["ccp-pgs"]["error_eps1e-2"].get<double>());
  return j;
}

Json warm_start(const Output& out, const CatalogOptions& o) {
  ScenarioSpec spec;
  spec.name = "warm_start";
  spec.scene = sliding_cube_scene();
  spec.duration = 1.0;
  for (SolverKind k : kAllSolvers) spec.solvers.push_back(physics_run(k));
  const std::vector<TimingRow> rows = timing_report(spec, 5, !o.deterministic_timing);
  std::vector<std::string> lines;
  Json solvers;
  for (const TimingRow& r : rows) {
    auto ns = [](double s) { return std::to_string(std::llround(s * 1e9)); };
    lines.push_back(std::string(solver_name(r.solver)) + "," + std::to_string(r.steps) + "," +
                    format_double(r.cold_mean_iterations) + "," +
                    format_double(r.warm_mean_iterations) + "," + ns(r.cold_mean_time) + "," +
                    ns(r.warm_mean_time) + "," + std::to_string(r.cold_unconverged) + "," +
                    std::to_string(r.warm_unconverged));
    solvers[std::string(solver_name(r.solver))] = {
        {"steps", r.steps},
        {"cold_mean_iterations", r.cold_mean_iterations},
        {"warm_mean_iterations", r.warm_mean_iterations},
        {"warm_over_cold_iterations", num(r.warm_mean_iterations / r.cold_mean_iterations)},
        {"cold_mean_time_ns", std::llround(r.cold_mean_time * 1e9)},
        {"warm_mean_time_ns", std::llround(r.warm_mean_time * 1e9)},
        {"cold_unconverged", r.cold_unconverged},
        {"warm_unconverged", r.warm_unconverged}};
  }
  out.table("timing.csv", "warm_start",
            "solver,steps,cold_mean_iterations,warm_mean_iterations,cold_mean_time_ns,"
            "warm_mean_time_ns,cold_unconverged,warm_unconverged",
            lines);
  Json j;
  j["scenario"] = "warm_start";
  j["parameters"] = {{"scene", "sliding_cube"}, {"duration", 1.0}, {"dt", 1e-3}, {"eps", kEps},
                     {"repeats", 5}, {"timing", o.deterministic_timing ? "deterministic" : "measured"}};
  j["solvers"] = solvers;
  return j;
}

double angle(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return std::atan2(std::abs(a.x() * b.y() - a.y() * b.x()), a.dot(b));
}

Json solver_checks(const Output& out, const CatalogOptions&) {
  // Oracle equivalence on random single contacts; odd problems have G_NT = 0.
  std::mt19937_64 rng(20240601);
  SolverConfig ncp = default_config(SolverKind::NcpPgs);
  ncp.eps_abs = 1e-13;
  ncp.max_iterations = 100000;
  SolverConfig stag = default_config(SolverKind::Staggered);
  stag.eps_abs = 1e-13;
  stag.max_iterations = 5000;  // strong N-T coupling needs several hundred outer sweeps
  SolverConfig rai = default_config(SolverKind::Raisim);
  rai.eps_abs = 1e-13;
  rai.max_iterations = 100000;

  double worst_ncp = 0.0, worst_stag = 0.0, worst_rai = 0.0;
  int oracle_failures = 0, decoupled = 0;
  std::vector<std::string> lines;
  for (int k = 0; k < 200; ++k) {
    const bool zero = k % 2 == 1;
    const ContactProblem p = random_single_contact(rng, zero);
    const std::vector<OracleSolution> cands = enumerate_single_contact(p);
    auto error = [&](const Eigen::VectorXd& lam) {
      double best = std::numeric_limits<double>::infinity();
      for (const OracleSolution& c : cands) {
        best = std::min(best, (lam - Eigen::VectorXd(c.lambda)).cwiseAbs().maxCoeff());
      }
      return best;
    };
    if (cands.empty()) ++oracle_failures;
    const double e_ncp = error(solve(SolverKind::NcpPgs, p, ncp).lambda);
    const double e_stag = error(solve(SolverKind::Staggered, p, stag).lambda);
    double e_rai = kNaN;
    if (zero) {
      ++decoupled;
      e_rai = error(solve(SolverKind::Raisim, p, rai).lambda);
      worst_rai = std::max(worst_rai, e_rai);
    }
    worst_ncp = std::max(worst_ncp, e_ncp);
    worst_stag = std::max(worst_stag, e_stag);
    const char* branch = cands.empty()                                 ? "none"
                         : cands[0].branch == OracleBranch::Takeoff   ? "takeoff"
                         : cands[0].branch == OracleBranch::Sticking ? "sticking"
                                                                      : "sliding";
    lines.push_back(std::to_string(k) + "," + format_double(p.cone(0).mu()) + "," +
                    (zero ? "0" : "1") + "," + branch + "," + format_double(e_ncp) + "," +
                    format_double(e_stag) + "," + format_double(e_rai));
  }
  out.table("oracle_equivalence.csv", "oracle_equivalence",
            "problem,mu,coupled,branch,error_ncp_pgs,error_staggered,error_raisim", lines);

  // Frictionless unanimity.
  std::mt19937_64 rng2(7);
  double worst_pair = 0.0;
  std::vector<std::string> flines;
  for (int k = 0; k < 40; ++k) {
    const ContactProblem p = random_frictionless(rng2, 1 + k % 4);
    std::vector<Eigen::VectorXd> sols;
    for (SolverKind s : kAllSolvers) {
      SolverConfig c = default_config(s);
      c.eps_abs = 1e-12;
      c.max_iterations = s == SolverKind::Staggered ? 5000 : 100000;
      sols.push_back(solve(s, p, c).lambda);
    }
    double pair = 0.0;
    for (size_t a = 0; a < sols.size(); ++a) {
      for (size_t b = a + 1; b < sols.size(); ++b) {
        pair = std::max(pair, (sols[a] - sols[b]).cwiseAbs().maxCoeff());
      }
    }
    worst_pair = std::max(worst_pair, pair);
    flines.push_back(std::to_string(k) + "," + std::to_string(p.num_contacts()) + "," +
                     format_double(pair));
  }
  out.table("frictionless.csv", "frictionless_unanimity", "problem,num_contacts,max_pairwise",
            flines);

  // Dissipation direction on a coupled sliding contact.
  const ContactProblem cp = coupled_sliding_problem();
  const ContactSolution r = solve(SolverKind::Raisim, cp, rai);
  const ContactSolution n = solve(SolverKind::NcpPgs, cp, ncp);
  const Eigen::Matrix3d G = cp.delassus();
  const double mu = cp.cone(0).mu();
  const Eigen::Vector2d rl = r.lambda.tail<2>();
  const Eigen::Vector2d rc = r.contact_velocity.tail<2>();
  const Eigen::Vector2d kkt =
      -rl - mu * mu * r.lambda(0) / G(0, 0) * Eigen::Vector2d(G(1, 0), G(2, 0));
  const Eigen::Vector2d nl = n.lambda.tail<2>();
  const Eigen::Vector2d nc = n.contact_velocity.tail<2>();

  Json j;
  j["scenario"] = "solver_checks";
  j["oracle_equivalence"] = {{"problems", 200},
                             {"decoupled_problems", decoupled},
                             {"oracle_failures", oracle_failures},
                             {"max_error_ncp_pgs", worst_ncp},
                             {"max_error_staggered", worst_stag},
                             {"max_error_raisim_decoupled", worst_rai},
                             {"eps", 1e-13}};
  j["frictionless"] = {{"problems", 40}, {"max_pairwise", worst_pair}, {"eps", 1e-12}};
  j["mdp"] = {{"raisim_lambda", {r.lambda(0), r.lambda(1), r.lambda(2)}},
              {"raisim_kkt_angle_rad", angle(rc, kkt)},
              {"raisim_mdp_angle_deg", angle(rl, -rc) * 180.0 / std::numbers::pi},
              {"ncp_lambda", {n.lambda(0), n.lambda(1), n.lambda(2)}},
              {"ncp_mdp_angle_rad", angle(nl, -nc)},
              {"ncp_tangential_speed", nc.norm()}};
  return j;
}

using Entry = Json (*)(const Output&, const CatalogOptions&);

const std::vector<std::pair<std::string, Entry>>& entries() {
  static const std::vector<std::pair<std::string, Entry>> e{
      {"solver_checks", solver_checks},
      {"sliding_cube", sliding_cube},
      {"sliding_cube_rotated45", sliding_cube_rotated45},
      {"growing_force_cube", growing_force_cube},
      {"stacked_cubes", stacked_cubes},
      {"dropped_cube", dropped_cube},
      {"compliant_rest", compliant_rest},
      {"dt_consistency", dt_consistency},
      {"eps_consistency", eps_consistency},
      {"warm_start", warm_start},
  };
  return e;
}

}  // namespace

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& e : entries()) n.push_back(e.first);
    return n;
  }();
  return names;
}

bool is_scenario(const std::string& name) {
  const auto& n = scenario_names();
  return std::find(n.begin(), n.end(), name) != n.end();
}

Json run_catalog_entry(const std::string& name, const std::optional<fs::path>& out_dir,
                       const CatalogOptions& options) {
  for (const auto& [key, fn] : entries()) {
    if (key != name) continue;
    const Output out(out_dir, name, options);
    Json j = fn(out, options);
    out.summary(j);
    return j;
  }
  throw std::invalid_argument("unknown scenario: " + name);
}

unsigned thread_budget() {
  if (const char* env = std::getenv("CONTACTBENCH_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace contactbench
