#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "contactbench/bench.hpp"
#include "contactbench/errors.hpp"
#include "contactbench/io.hpp"

namespace cb = contactbench;
using cb::Json;
using cb::SolverKind;

namespace {

Json two_contact_problem() {
  return Json::parse(R"({
    "num_contacts": 2,
    "delassus": [[2, 0.1, 0, 0.5, 0, 0],
                 [0.1, 1.5, 0, 0, 0.2, 0],
                 [0, 0, 1.5, 0, 0, 0.1],
                 [0.5, 0, 0, 2, 0, 0],
                 [0, 0.2, 0, 0, 1.5, 0],
                 [0, 0, 0.1, 0, 0, 1.5]],
    "free_velocity": [-1, 0.4, -0.3, -0.5, -2, 0.1],
    "mus": [0.5, 0.2],
    "compliance": [1e-4, 0, 0, 1e-4, 0, 0]
  })");
}

std::string message_of(const Json& j) {
  try {
    cb::problem_from_json(j);
  } catch (const cb::InputError& e) {
    return e.what();
  }
  return {};
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string cell; std::getline(in, cell, ',');) out.push_back(cell);
  return out;
}

}  // namespace

TEST(ProblemJson, RoundTripGivesIdenticalSolutions) {
  const cb::ContactProblem p = cb::problem_from_json(two_contact_problem());
  const cb::ContactProblem q = cb::problem_from_json(Json::parse(cb::problem_to_json(p).dump()));
  EXPECT_EQ(p.delassus(), q.delassus());
  EXPECT_EQ(p.free_velocity(), q.free_velocity());
  EXPECT_EQ(p.compliance(), q.compliance());
  for (SolverKind k : cb::kAllSolvers) {
    const auto a = cb::solve(k, p, cb::default_config(k));
    const auto b = cb::solve(k, q, cb::default_config(k));
    EXPECT_LE((a.lambda - b.lambda).cwiseAbs().maxCoeff(), 1e-12) << cb::solver_name(k);
  }
}

TEST(ProblemJson, AcceptsFlatDelassus) {
  Json j = two_contact_problem();
  Json flat = Json::array();
  for (const Json& row : j["delassus"]) {
    for (const Json& x : row) flat.push_back(x);
  }
  j["delassus"] = flat;
  EXPECT_EQ(cb::problem_from_json(j).delassus(),
            cb::problem_from_json(two_contact_problem()).delassus());
}

TEST(ProblemJson, ErrorsNameTheField) {
  Json j = two_contact_problem();
  j["num_contacts"] = 1;
  j["delassus"] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  j["mus"] = {0.5};
  j.erase("compliance");
  j["free_velocity"] = {-1, 0};
  EXPECT_EQ(message_of(j), "free_velocity: expected 3 entries, got 2");

  Json missing = two_contact_problem();
  missing.erase("mus");
  EXPECT_EQ(message_of(missing).rfind("mus", 0), 0u);
  Json bad = two_contact_problem();
  bad["delassus"][1][2] = "x";
  EXPECT_EQ(message_of(bad).rfind("delassus[1][2]", 0), 0u);
  Json rows = two_contact_problem();
  rows["delassus"].erase(0);
  EXPECT_EQ(message_of(rows).rfind("delassus", 0), 0u);
  Json negative = two_contact_problem();
  negative["mus"][1] = -0.1;
  EXPECT_FALSE(message_of(negative).empty());
  EXPECT_FALSE(message_of(Json::array()).empty());
}

TEST(ProblemFile, UnreadableOrMalformed) {
  EXPECT_THROW(cb::read_problem_file("/nonexistent/problem.json"), cb::InputError);
  const std::string path = ::testing::TempDir() + "truncated-problem.json";
  std::ofstream(path) << R"({"num_contacts": 1, "delassus": [1, 0)";
  EXPECT_THROW(cb::read_problem_file(path), cb::InputError);
}

TEST(SceneJson, RoundTrip) {
  cb::Scene s = cb::stacked_cubes_scene(10.0);
  s.restitution = 0.25;
  s.baumgarte = 3.0;
  s.tangent_rotation = 0.3;
  s.combine = cb::TargetCombine::Sum;
  s.initial_states[1].orientation =
      Eigen::Quaterniond(Eigen::AngleAxisd(0.01, Eigen::Vector3d::UnitZ()));
  cb::ExternalWrench f;
  f.body = 1;
  f.start = 0.1;
  f.end = 0.2;
  f.wrench << 1, 2, 3, 4, 5, 6;
  s.forces = {f};
  const cb::Scene r = cb::scene_from_json(Json::parse(cb::scene_to_json(s).dump()));
  ASSERT_EQ(r.bodies.size(), 2u);
  EXPECT_EQ(r.bodies[1].mass, s.bodies[1].mass);
  EXPECT_EQ(r.bodies[1].inertia, s.bodies[1].inertia);
  EXPECT_EQ(r.initial_states[1].position, s.initial_states[1].position);
  EXPECT_EQ(r.initial_states[1].orientation.coeffs(), s.initial_states[1].orientation.coeffs());
  EXPECT_EQ(r.restitution, 0.25);
  EXPECT_EQ(r.baumgarte, 3.0);
  EXPECT_EQ(r.tangent_rotation, 0.3);
  EXPECT_EQ(r.combine, cb::TargetCombine::Sum);
  ASSERT_EQ(r.forces.size(), 1u);
  EXPECT_EQ(r.forces[0].wrench, f.wrench);
  EXPECT_EQ(r.forces[0].body, 1);
}

TEST(SceneJson, DefaultsAndErrors) {
  const cb::Scene s = cb::scene_from_json(Json::parse(R"({"bodies": [{"mass": 2}]})"));
  EXPECT_EQ(s.mu, cb::Scene{}.mu);
  EXPECT_EQ(s.dt, cb::Scene{}.dt);
  EXPECT_EQ(s.bodies[0].mass, 2.0);
  EXPECT_THROW(cb::scene_from_json(Json::parse(R"({"mu": 0.3})")), cb::InputError);
  EXPECT_THROW(cb::scene_from_json(Json::parse(R"({"bodies": [{"position": [0, 1]}]})")),
               cb::InputError);
  EXPECT_THROW(cb::scene_from_json(Json::parse(R"({"bodies": [{}], "dt": -1})")),
               cb::InputError);
  EXPECT_THROW(cb::read_scene_file("/nonexistent/scene.json"), cb::InputError);
}

TEST(FormatDouble, RoundTrips) {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 9.81, 0.0}) {
    EXPECT_EQ(std::stod(cb::format_double(x)), x);
  }
}

TEST(FeatureCode, Layout) {
  EXPECT_EQ(cb::feature_code({0, -1, 3}), 3);
  EXPECT_EQ(cb::feature_code({1, 0, 2}), 112);
  EXPECT_EQ(cb::feature_code({2, -1, 0}), 200);
}

TEST(TrajectoryCsv, VersionOneLayout) {
  const cb::Scene s = cb::sliding_cube_scene(1.0, 0.3);
  const auto rec = cb::run_trajectory(s, 1.0, cb::solver_runs({SolverKind::NcpPgs}, 1e-8, 1000)[0],
                                      true, false, "sliding_cube");
  std::ostringstream out;
  cb::write_trajectory_csv(out, rec, {true, {{"note", "x"}}});
  const auto lines = lines_of(out.str());
  ASSERT_FALSE(lines.empty());
  EXPECT_EQ(lines[0], "# contactbench-csv v1");
  size_t header = 0;
  while (header < lines.size() && lines[header].rfind("#", 0) == 0) ++header;
  ASSERT_LT(header, lines.size());
  const std::string meta = out.str().substr(0, out.str().find("\nt,"));
  EXPECT_NE(meta.find("# solver: ncp-pgs"), std::string::npos);
  EXPECT_NE(meta.find("# note: x"), std::string::npos);
  EXPECT_NE(meta.find("# timing: deterministic"), std::string::npos);

  const auto columns = split(lines[header]);
  EXPECT_EQ(columns.front(), "t");
  EXPECT_EQ(lines.size() - header - 1, 1000u);
  size_t time_col = 0, feature_col = 0;
  for (size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == "solve_time_ns") time_col = i;
    if (columns[i] == "c0_feature") feature_col = i;
  }
  ASSERT_GT(time_col, 0u);
  ASSERT_GT(feature_col, 0u);
  for (size_t k = header + 1; k < lines.size(); ++k) {
    const auto cells = split(lines[k]);
    ASSERT_EQ(cells.size(), columns.size()) << "row " << k;
    EXPECT_EQ(cells[time_col], "0");
  }
  const auto first = split(lines[header + 1]);
  EXPECT_EQ(std::stod(first[0]), s.dt);
  EXPECT_EQ(first[feature_col], "0");
}

TEST(TrajectoryCsv, PadsEmptySlots) {
  const cb::Scene s = cb::dropped_cube_scene(0.01, 0.0);
  const auto rec = cb::run_trajectory(s, 0.1, cb::solver_runs({SolverKind::NcpPgs}, 1e-8, 1000)[0],
                                      true);
  std::ostringstream out;
  cb::write_trajectory_csv(out, rec, {true, {}});
  const auto lines = lines_of(out.str());
  size_t header = 0;
  while (lines[header].rfind("#", 0) == 0) ++header;
  const auto columns = split(lines[header]);
  size_t count_col = 0, feature_col = 0;
  for (size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == "num_contacts") count_col = i;
    if (columns[i] == "c3_feature") feature_col = i;
  }
  ASSERT_GT(feature_col, 0u);
  const auto first = split(lines[header + 1]);
  EXPECT_EQ(first[count_col], "0");
  EXPECT_EQ(first[feature_col], "-1");
}

TEST(SolutionJson, TraceSeriesHaveOneEntryPerIteration) {
  const cb::ContactProblem p = cb::problem_from_json(two_contact_problem());
  for (SolverKind k : cb::kAllSolvers) {
    cb::SolverConfig c = cb::default_config(k);
    c.trace_snapshots = 3;
    const cb::ContactSolution sol = cb::solve(k, p, c);
    const Json j = Json::parse(cb::solution_to_json(sol).dump());
    const auto n = static_cast<size_t>(sol.iterations);
    EXPECT_EQ(j["iterations"].get<size_t>(), n);
    EXPECT_EQ(j["trace"]["ncp_criterion"].size(), n) << cb::solver_name(k);
    EXPECT_EQ(j["trace"]["stopping_criterion"].size(), n) << cb::solver_name(k);
    EXPECT_EQ(j["trace"]["snapshots"].size(), std::min<size_t>(3, n));
    EXPECT_EQ(j["trace"]["primal_gap"].size(), k == SolverKind::CcpAdmm ? n : 0u);
    EXPECT_EQ(j["lambda"].size(), 6u);
    EXPECT_EQ(j["residuals"]["ncp_criterion"].get<double>(), sol.residuals.ncp_criterion);
    EXPECT_EQ(j.contains("rho"), k == SolverKind::CcpAdmm);
    EXPECT_FALSE(cb::solution_to_json(sol, false).contains("trace"));
  }
}
