#include "contactbench/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "contactbench/errors.hpp"

namespace contactbench {
namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw InputError(field + ": " + what);
}

const Json* find(const Json& j, const char* key) {
  const auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

const Json& require(const Json& j, const char* key) {
  const Json* v = find(j, key);
  if (v == nullptr) fail(key, "missing");
  return *v;
}

double number(const Json& v, const std::string& field) {
  if (!v.is_number()) fail(field, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(field, "expected a finite number");
  return x;
}

double number_or(const Json& j, const char* key, double fallback) {
  const Json* v = find(j, key);
  return v == nullptr ? fallback : number(*v, key);
}

int integer(const Json& v, const std::string& field) {
  if (!v.is_number_integer()) fail(field, "expected an integer");
  return v.get<int>();
}

/// expected < 0 accepts any length.
Eigen::VectorXd vector(const Json& v, const std::string& field, Eigen::Index expected) {
  if (!v.is_array()) fail(field, "expected an array");
  const auto n = static_cast<Eigen::Index>(v.size());
  if (expected >= 0 && n != expected) {
    fail(field, "expected " + std::to_string(expected) + " entries, got " + std::to_string(n));
  }
  Eigen::VectorXd out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out(i) = number(v[static_cast<size_t>(i)], field + "[" + std::to_string(i) + "]");
  }
  return out;
}

Eigen::Vector3d vec3_or(const Json& j, const char* key, const Eigen::Vector3d& fallback,
                        const std::string& prefix) {
  const Json* v = find(j, key);
  return v == nullptr ? fallback : Eigen::Vector3d(vector(*v, prefix + key, 3));
}

Vector6d vec6_or(const Json& j, const char* key, const std::string& prefix) {
  const Json* v = find(j, key);
  return v == nullptr ? Vector6d::Zero() : Vector6d(vector(*v, prefix + key, 6));
}

Eigen::MatrixXd matrix(const Json& v, const std::string& field, Eigen::Index n) {
  if (!v.is_array()) fail(field, "expected an array");
  Eigen::MatrixXd out(n, n);
  if (!v.empty() && v[0].is_array()) {
    if (static_cast<Eigen::Index>(v.size()) != n) {
      fail(field, "expected " + std::to_string(n) + " rows, got " + std::to_string(v.size()));
    }
    for (Eigen::Index r = 0; r < n; ++r) {
      out.row(r) = vector(v[static_cast<size_t>(r)], field + "[" + std::to_string(r) + "]", n);
    }
    return out;
  }
  const Eigen::VectorXd flat = vector(v, field, n * n);
  for (Eigen::Index r = 0; r < n; ++r) out.row(r) = flat.segment(r * n, n);
  return out;
}

Json to_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Json to_json(const Eigen::MatrixXd& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(to_json(Eigen::VectorXd(m.row(r))));
  return out;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(path, "cannot open file");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    fail(path, std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace

ContactProblem problem_from_json(const Json& j) {
  if (!j.is_object()) fail("problem", "expected a JSON object");
  const int nc = integer(require(j, "num_contacts"), "num_contacts");
  if (nc < 0) fail("num_contacts", "must be >= 0");
  const Eigen::Index n = 3 * static_cast<Eigen::Index>(nc);
  Eigen::MatrixXd G = matrix(require(j, "delassus"), "delassus", n);
  Eigen::VectorXd g = vector(require(j, "free_velocity"), "free_velocity", n);
  const Eigen::VectorXd mus = vector(require(j, "mus"), "mus", nc);
  std::optional<Eigen::VectorXd> compliance;
  if (const Json* c = find(j, "compliance"); c != nullptr && !c->is_null()) {
    compliance = vector(*c, "compliance", n);
  }
  try {
    return ContactProblem(std::move(G), std::move(g), std::vector<double>(mus.begin(), mus.end()),
                          std::move(compliance));
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
}

Json problem_to_json(const ContactProblem& problem) {
  Json j;
  j["num_contacts"] = problem.num_contacts();
  j["delassus"] = to_json(problem.delassus());
  j["free_velocity"] = to_json(problem.free_velocity());
  Json mus = Json::array();
  for (const FrictionCone& c : problem.cones()) mus.push_back(c.mu());
  j["mus"] = mus;
  if (problem.compliance()) j["compliance"] = to_json(*problem.compliance());
  return j;
}

ContactProblem read_problem_file(const std::string& path) {
  return problem_from_json(read_json_file(path));
}

Json trace_to_json(const SolveTrace& trace) {
  Json j;
  j["ncp_criterion"] = trace.ncp_criterion;
  j["stopping_criterion"] = trace.stopping_criterion;
  j["primal_gap"] = trace.primal_gap;
  Json snaps = Json::array();
  for (const Eigen::VectorXd& s : trace.snapshots) snaps.push_back(to_json(s));
  j["snapshots"] = snaps;
  j["branches"] = {{"takeoff", trace.branches.takeoff},
                   {"stiction", trace.branches.stiction},
                   {"sliding", trace.branches.sliding}};
  return j;
}

Json solution_to_json(const ContactSolution& solution, bool with_trace) {
  Json j;
  j["lambda"] = to_json(solution.lambda);
  j["contact_velocity"] = to_json(solution.contact_velocity);
  j["residuals"] = {{"primal", to_json(solution.residuals.primal)},
                    {"dual", to_json(solution.residuals.dual)},
                    {"complementarity", to_json(solution.residuals.complementarity)},
                    {"ncp_criterion", solution.residuals.ncp_criterion}};
  j["stopping_criterion"] = solution.stopping_criterion;
  j["iterations"] = solution.iterations;
  j["converged"] = solution.converged;
  j["solve_time"] = solution.solve_time;
  if (solution.dual.size() > 0) {
    j["dual"] = to_json(solution.dual);
    j["rho"] = solution.rho;
  }
  if (with_trace) j["trace"] = trace_to_json(solution.trace);
  return j;
}

Scene scene_from_json(const Json& j) {
  if (!j.is_object()) fail("scene", "expected a JSON object");
  Scene scene;
  const Json& bodies = require(j, "bodies");
  if (!bodies.is_array() || bodies.empty()) fail("bodies", "expected a non-empty array");
  for (size_t b = 0; b < bodies.size(); ++b) {
    const Json& jb = bodies[b];
    const std::string prefix = "bodies[" + std::to_string(b) + "].";
    if (!jb.is_object()) fail(prefix.substr(0, prefix.size() - 1), "expected an object");
    const double mass = number_or(jb, "mass", 1.0);
    if (!(mass > 0.0)) fail(prefix + "mass", "must be > 0");
    const Eigen::Vector3d half = vec3_or(jb, "half_extents", Eigen::Vector3d::Constant(0.5), prefix);
    if (!(half.array() > 0.0).all()) fail(prefix + "half_extents", "must be > 0");
    BodyModel model = BodyModel::box(mass, half);
    model.inertia = vec3_or(jb, "inertia", model.inertia, prefix);
    if (!(model.inertia.array() > 0.0).all()) fail(prefix + "inertia", "must be > 0");
    scene.bodies.push_back(model);

    RigidBodyState s;
    s.position = vec3_or(jb, "position", Eigen::Vector3d::Zero(), prefix);
    if (const Json* q = find(jb, "orientation")) {
      const Eigen::VectorXd wxyz = vector(*q, prefix + "orientation", 4);
      if (!(wxyz.norm() > 0.0)) fail(prefix + "orientation", "must be a nonzero quaternion");
      s.orientation = Eigen::Quaterniond(wxyz(0), wxyz(1), wxyz(2), wxyz(3)).normalized();
    }
    s.linear_velocity = vec3_or(jb, "linear_velocity", Eigen::Vector3d::Zero(), prefix);
    s.angular_velocity = vec3_or(jb, "angular_velocity", Eigen::Vector3d::Zero(), prefix);
    scene.initial_states.push_back(s);
  }
  if (const Json* forces = find(j, "forces")) {
    if (!forces->is_array()) fail("forces", "expected an array");
    for (size_t k = 0; k < forces->size(); ++k) {
      const Json& jf = (*forces)[k];
      const std::string prefix = "forces[" + std::to_string(k) + "].";
      if (!jf.is_object()) fail(prefix.substr(0, prefix.size() - 1), "expected an object");
      ExternalWrench f;
      f.body = integer(require(jf, "body"), prefix + "body");
      if (f.body < 0 || f.body >= static_cast<int>(scene.bodies.size())) {
        fail(prefix + "body", "index out of range");
      }
      f.start = number_or(jf, "start", 0.0);
      f.end = number_or(jf, "end", std::numeric_limits<double>::infinity());
      f.wrench = vec6_or(jf, "wrench", prefix);
      f.wrench_rate = vec6_or(jf, "wrench_rate", prefix);
      scene.forces.push_back(f);
    }
  }
  scene.gravity = vec3_or(j, "gravity", scene.gravity, "");
  scene.mu = number_or(j, "mu", scene.mu);
  scene.restitution = number_or(j, "restitution", scene.restitution);
  scene.baumgarte = number_or(j, "baumgarte", scene.baumgarte);
  scene.compliance = number_or(j, "compliance", scene.compliance);
  scene.tangential_compliance = number_or(j, "tangential_compliance", scene.tangential_compliance);
  scene.dt = number_or(j, "dt", scene.dt);
  scene.contact_margin = number_or(j, "contact_margin", scene.contact_margin);
  scene.tangent_rotation = number_or(j, "tangent_rotation", scene.tangent_rotation);
  if (const Json* c = find(j, "combine")) {
    if (*c == "max") {
      scene.combine = TargetCombine::Max;
    } else if (*c == "sum") {
      scene.combine = TargetCombine::Sum;
    } else {
      fail("combine", "expected \"max\" or \"sum\"");
    }
  }
  try {
    validate(scene);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  return scene;
}

Json scene_to_json(const Scene& scene) {
  auto v3 = [](const Eigen::Vector3d& v) { return to_json(Eigen::VectorXd(v)); };
  Json bodies = Json::array();
  for (size_t b = 0; b < scene.bodies.size(); ++b) {
    const BodyModel& m = scene.bodies[b];
    const RigidBodyState& s = scene.initial_states[b];
    const Eigen::Quaterniond& q = s.orientation;
    bodies.push_back({{"mass", m.mass},
                      {"half_extents", v3(m.half_extents)},
                      {"inertia", v3(m.inertia)},
                      {"position", v3(s.position)},
                      {"orientation", {q.w(), q.x(), q.y(), q.z()}},
                      {"linear_velocity", v3(s.linear_velocity)},
                      {"angular_velocity", v3(s.angular_velocity)}});
  }
  Json forces = Json::array();
  for (const ExternalWrench& f : scene.forces) {
    Json jf = {{"body", f.body},
               {"start", f.start},
               {"wrench", to_json(Eigen::VectorXd(f.wrench))},
               {"wrench_rate", to_json(Eigen::VectorXd(f.wrench_rate))}};
    // JSON has no infinity; an absent end means "never".
    if (std::isfinite(f.end)) jf["end"] = f.end;
    forces.push_back(jf);
  }
  return {{"bodies", bodies},
          {"forces", forces},
          {"gravity", v3(scene.gravity)},
          {"mu", scene.mu},
          {"restitution", scene.restitution},
          {"baumgarte", scene.baumgarte},
          {"compliance", scene.compliance},
          {"tangential_compliance", scene.tangential_compliance},
          {"dt", scene.dt},
          {"contact_margin", scene.contact_margin},
          {"tangent_rotation", scene.tangent_rotation},
          {"combine", scene.combine == TargetCombine::Max ? "max" : "sum"}};
}

Scene read_scene_file(const std::string& path) { return scene_from_json(read_json_file(path)); }

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

int feature_code(const FeatureId& id) { return 100 * id.body + 10 * (id.other + 1) + id.corner; }

void write_trajectory_csv(std::ostream& out, const TrajectoryRecord& record,
                          const CsvOptions& options) {
  const size_t bodies = record.initial_states.size();
  size_t slots = 0;
  for (const StepRecord& s : record.steps) slots = std::max(slots, s.patches.size());

  out << "# contactbench-csv v1\n";
  out << "# scenario: " << record.scenario << "\n";
  out << "# solver: " << solver_name(record.solver) << "\n";
  out << "# dt: " << format_double(record.dt) << "\n";
  out << "# initial_energy: " << format_double(record.initial_energy) << "\n";
  out << "# consistency_integrand: com_position\n";
  out << "# feature_code: 100*body+10*(other+1)+corner, other=-1 is the floor, -1 is an empty slot\n";
  out << "# timing: " << (options.deterministic_timing ? "deterministic" : "measured") << "\n";
  for (const auto& [key, value] : options.metadata) out << "# " << key << ": " << value << "\n";
  if (record.error) {
    std::string msg = *record.error;
    for (char& c : msg) {
      if (c == '\n') c = ' ';
    }
    out << "# error: " << msg << "\n";
  }

  out << "t";
  for (size_t b = 0; b < bodies; ++b) {
    for (const char* f : {"px", "py", "pz", "qw", "qx", "qy", "qz", "vx", "vy", "vz", "wx", "wy", "wz"}) {
      out << ",b" << b << "_" << f;
    }
  }
  out << ",num_contacts";
  for (size_t k = 0; k < slots; ++k) {
    for (const char* f : {"feature", "lambda_n", "lambda_t1", "lambda_t2", "fx", "fy", "fz"}) {
      out << ",c" << k << "_" << f;
    }
  }
  out << ",eps_p,eps_d,eps_c,ncp_criterion,stopping_criterion,energy,iterations,converged,"
         "solve_time_ns,takeoff,stiction,sliding\n";

  auto put = [&out](double x) { out << ',' << format_double(x); };
  for (const StepRecord& s : record.steps) {
    out << format_double(s.time);
    for (size_t b = 0; b < bodies; ++b) {
      const RigidBodyState& st = s.states[b];
      for (int i = 0; i < 3; ++i) put(st.position(i));
      put(st.orientation.w());
      put(st.orientation.x());
      put(st.orientation.y());
      put(st.orientation.z());
      for (int i = 0; i < 3; ++i) put(st.linear_velocity(i));
      for (int i = 0; i < 3; ++i) put(st.angular_velocity(i));
    }
    out << ',' << s.patches.size();
    for (size_t k = 0; k < slots; ++k) {
      if (k < s.patches.size()) {
        const ContactPatch& p = s.patches[k];
        const Eigen::Vector3d l = s.lambda.segment<3>(3 * static_cast<Eigen::Index>(k));
        const Eigen::Vector3d f = l(0) * p.normal + l(1) * p.t1 + l(2) * p.t2;
        out << ',' << feature_code(p.feature);
        for (int i = 0; i < 3; ++i) put(l(i));
        for (int i = 0; i < 3; ++i) put(f(i));
      } else {
        out << ",-1,0,0,0,0,0,0";
      }
    }
    const Residuals& r = s.residuals;
    put(r.primal.size() > 0 ? r.primal.maxCoeff() : 0.0);
    put(r.dual.size() > 0 ? r.dual.maxCoeff() : 0.0);
    put(r.complementarity.size() > 0 ? r.complementarity.maxCoeff() : 0.0);
    put(r.ncp_criterion);
    put(s.stopping_criterion);
    put(s.energy);
    out << ',' << s.iterations << ',' << (s.converged ? 1 : 0) << ','
        << (options.deterministic_timing ? 0LL : std::llround(s.solve_time * 1e9)) << ','
        << s.branches.takeoff << ',' << s.branches.stiction << ',' << s.branches.sliding << '\n';
  }
}

}  // namespace contactbench
