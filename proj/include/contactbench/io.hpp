#ifndef CONTACTBENCH_IO_HPP
#define CONTACTBENCH_IO_HPP

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "contactbench/bench.hpp"
#include "contactbench/contact-problem.hpp"
#include "contactbench/contact-solution.hpp"
#include "contactbench/dynamics.hpp"

namespace contactbench {

using Json = nlohmann::json;

// Problem files: {num_contacts, delassus, free_velocity, mus, compliance?}.
// delassus is either an array of 3n rows or a flat row-major array of 9n^2 entries.

/// Throws InputError naming the field, e.g. "free_velocity: expected 3 entries, got 2".
ContactProblem problem_from_json(const Json& j);
Json problem_to_json(const ContactProblem& problem);
/// Reads and parses a problem file. Unreadable files and bad JSON throw InputError.
ContactProblem read_problem_file(const std::string& path);

Json trace_to_json(const SolveTrace& trace);
/// {lambda, contact_velocity, residuals, stopping_criterion, iterations, converged,
///  solve_time, trace}; `rho` and `dual` only when the solver produced them.
Json solution_to_json(const ContactSolution& solution, bool with_trace = true);

// Scene files. Every key is optional except bodies; missing keys take the Scene defaults.
//   bodies: [{mass, half_extents, position, orientation [w,x,y,z], linear_velocity,
//             angular_velocity}]
//   forces: [{body, start, end, wrench [fx,fy,fz,tx,ty,tz], wrench_rate}]
//   gravity, mu, restitution, baumgarte, compliance, tangential_compliance, dt,
//   contact_margin, tangent_rotation, combine ("max" | "sum")

/// Throws InputError naming the field; the result has passed validate(Scene).
Scene scene_from_json(const Json& j);
Json scene_to_json(const Scene& scene);
Scene read_scene_file(const std::string& path);

/// Round-trip text of a double (%.17g).
std::string format_double(double x);

struct CsvOptions {
  /// Writes 0 in solve_time_ns so files are byte-identical across runs.
  bool deterministic_timing = false;
  /// Extra "# key: value" lines after the version header.
  std::vector<std::pair<std::string, std::string>> metadata;
};

/// Feature code written in the CSV: 100 body + 10 (other + 1) + corner.
int feature_code(const FeatureId& id);

/// Version 1 trajectory CSV. Header comment `# contactbench-csv v1`, metadata
/// comments, one column-name row, then one row per step. Contact slots are
/// padded to the largest contact count in the record with feature -1.
void write_trajectory_csv(std::ostream& out, const TrajectoryRecord& record,
                          const CsvOptions& options = {});

}  // namespace contactbench

#endif
