// contactbench command-line entry point.
//
//   contactbench solve <problem.json> [--solver ncp-pgs] [--eps 1e-8] ...
//   contactbench simulate <scene.json | builtin id> [--dt] [--duration] [--warm] [--out file.csv]
//   contactbench bench [all | names...] [--out dir] [--deterministic-timing]
//   contactbench list-scenarios
//
// Exit codes: 0 success (solve: converged), 2 solve budget exhausted, 1 input or execution error.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "contactbench/bench.hpp"
#include "contactbench/catalog.hpp"
#include "contactbench/errors.hpp"
#include "contactbench/io.hpp"
#include "contactbench/solvers.hpp"

namespace cb = contactbench;

namespace {

constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kBudget = 2;

struct SolverFlags {
  std::string solver = "ncp-pgs";
  std::optional<double> eps;
  std::optional<int> max_iters;
  std::optional<double> rho;
  std::optional<double> over_relax;

  void add_to(CLI::App& app) {
    app.add_option("--solver", solver,
                   "lcp-pgs | ccp-pgs | ccp-admm | raisim | ncp-pgs | staggered")
        ->capture_default_str();
    app.add_option("--eps", eps, "absolute stopping tolerance (default 1e-8)");
    app.add_option("--max-iters", max_iters, "iteration budget (default 1000; staggered 5)");
    app.add_option("--rho", rho, "ADMM penalty (default 0.1 trace(G)/(3 n_c), adaptive)");
    app.add_option("--over-relax", over_relax, "over-relaxation in (0, 2) (default 1)");
  }

  /// Throws std::invalid_argument for an unknown solver or out-of-range value.
  std::pair<cb::SolverKind, cb::SolverConfig> resolve() const {
    const std::optional<cb::SolverKind> kind = cb::parse_solver(solver);
    if (!kind) throw std::invalid_argument("--solver: unknown solver '" + solver + "'");
    cb::SolverConfig c = cb::default_config(*kind);
    if (eps) c.eps_abs = *eps;
    if (max_iters) c.max_iterations = *max_iters;
    if (rho) c.admm_rho = *rho;
    if (over_relax) c.over_relaxation = *over_relax;
    cb::validate(c);
    return {*kind, c};
  }
};

int cmd_solve(const std::string& path, const SolverFlags& flags, bool trace) {
  const auto [kind, config] = flags.resolve();
  const cb::ContactProblem problem = cb::read_problem_file(path);
  const cb::ContactSolution sol = cb::solve(kind, problem, config);
  cb::Json j = cb::solution_to_json(sol, trace);
  j["solver"] = cb::solver_name(kind);
  std::cout << j.dump(2) << "\n";
  return sol.converged ? kOk : kBudget;
}

cb::Scene load_scene(const std::string& id) {
  if (std::optional<cb::Scene> s = cb::builtin_scene(id)) return *s;
  return cb::read_scene_file(id);
}

int cmd_simulate(const std::string& scene_id, const SolverFlags& flags, std::optional<double> dt,
                 double duration, bool warm, const std::string& out, bool deterministic) {
  const auto [kind, config] = flags.resolve();
  cb::Scene scene = load_scene(scene_id);
  if (dt) scene.dt = *dt;
  cb::ScenarioSpec spec{scene_id, scene, duration, {{kind, config}}, warm, false};
  cb::validate(spec);
  const cb::TrajectoryRecord rec = cb::run_trajectory(scene, duration, {kind, config}, warm,
                                                      false, scene_id);
  std::ofstream f(out);
  if (!f) throw std::runtime_error(out + ": cannot write");
  cb::CsvOptions csv;
  csv.deterministic_timing = deterministic;
  csv.metadata = {{"warm", warm ? "1" : "0"},
                  {"eps", cb::format_double(config.eps_abs)},
                  {"max_iterations", std::to_string(config.max_iterations)}};
  cb::write_trajectory_csv(f, rec, csv);
  double iters = 0.0;
  for (const cb::StepRecord& s : rec.steps) iters += s.iterations;
  const double mean = rec.steps.empty() ? 0.0 : iters / static_cast<double>(rec.steps.size());
  const double energy = rec.steps.empty() ? rec.initial_energy : rec.steps.back().energy;
  std::printf("steps=%zu mean_iterations=%.3f final_energy=%.9g\n", rec.steps.size(), mean,
              energy);
  if (rec.error) {
    std::cerr << "error: " << *rec.error << "\n";
    return kError;
  }
  return kOk;
}

std::string valid_names() {
  std::string s;
  for (const std::string& n : cb::scenario_names()) s += (s.empty() ? "" : ", ") + n;
  return s;
}

int cmd_bench(std::vector<std::string> names, const std::string& out, bool deterministic) {
  if (names.empty() || (names.size() == 1 && names[0] == "all")) names = cb::scenario_names();
  for (const std::string& n : names) {
    if (!cb::is_scenario(n)) {
      std::cerr << "unknown scenario '" << n << "'; valid: all, " << valid_names() << "\n";
      return kError;
    }
  }
  cb::CatalogOptions options;
  options.deterministic_timing = deterministic;
  options.threads = cb::thread_budget();
  const std::filesystem::path root(out);
  for (const std::string& n : names) {
    const auto t0 = std::chrono::steady_clock::now();
    cb::run_catalog_entry(n, root, options);
    const double s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cerr << n << ": done in " << s << " s\n";
  }
  return kOk;
}

int cmd_list() {
  std::cout << "bench scenarios:\n";
  for (const std::string& n : cb::scenario_names()) std::cout << "  " << n << "\n";
  std::cout << "builtin scenes (simulate):\n";
  for (const std::string& n : cb::builtin_scene_ids()) std::cout << "  " << n << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contact solver benchmark"};
  app.require_subcommand(1, 1);

  SolverFlags solve_flags;
  std::string problem_path;
  bool trace = false;
  CLI::App* solve = app.add_subcommand("solve", "solve a problem file and print JSON");
  solve->add_option("problem", problem_path, "problem JSON file")->required();
  solve_flags.add_to(*solve);
  solve->add_flag("--trace", trace, "include the per-iteration trace");

  SolverFlags sim_flags;
  std::string scene_id;
  std::optional<double> dt;
  double duration = 1.0;
  bool warm = false;
  std::string sim_out = "simulation.csv";
  bool sim_deterministic = false;
  CLI::App* simulate = app.add_subcommand("simulate", "simulate a scene and write a v1 CSV");
  simulate->add_option("scene", scene_id, "scene JSON file or builtin id")->required();
  sim_flags.add_to(*simulate);
  simulate->add_option("--dt", dt, "time step override (s)");
  simulate->add_option("--duration", duration, "simulated time (s)")->capture_default_str();
  simulate->add_flag("--warm", warm, "warm-start from the previous step's impulses");
  simulate->add_option("--out", sim_out, "CSV output path")->capture_default_str();
  simulate->add_flag("--deterministic-timing", sim_deterministic, "write zero wall times");

  std::vector<std::string> names;
  std::string bench_out = "bench-out";
  bool bench_deterministic = false;
  CLI::App* bench = app.add_subcommand("bench", "run catalog scenarios");
  bench->add_option("scenarios", names, "scenario names or 'all' (default all)");
  bench->add_option("--out", bench_out, "output directory")->capture_default_str();
  bench->add_flag("--deterministic-timing", bench_deterministic, "write zero wall times");

  CLI::App* list = app.add_subcommand("list-scenarios", "list catalog and builtin scene names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kError;
  }

  try {
    if (*solve) return cmd_solve(problem_path, solve_flags, trace);
    if (*simulate) {
      return cmd_simulate(scene_id, sim_flags, dt, duration, warm, sim_out, sim_deterministic);
    }
    if (*bench) return cmd_bench(names, bench_out, bench_deterministic);
    if (*list) return cmd_list();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
