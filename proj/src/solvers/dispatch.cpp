#include <stdexcept>

#include "contactbench/solvers.hpp"

namespace contactbench {

namespace {

constexpr std::array<std::pair<SolverKind, std::string_view>, 6> kNames = {{
    {SolverKind::LcpPgs, "lcp-pgs"},
    {SolverKind::CcpPgs, "ccp-pgs"},
    {SolverKind::CcpAdmm, "ccp-admm"},
    {SolverKind::Raisim, "raisim"},
    {SolverKind::NcpPgs, "ncp-pgs"},
    {SolverKind::Staggered, "staggered"},
}};

}  // namespace

std::string_view solver_name(SolverKind kind) {
  for (const auto& [k, name] : kNames) {
    if (k == kind) return name;
  }
  throw std::invalid_argument("unknown solver kind");
}

std::optional<SolverKind> parse_solver(std::string_view name) {
  for (const auto& [k, n] : kNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

SolverConfig default_config(SolverKind kind) {
  SolverConfig config;
  if (kind == SolverKind::Staggered) config.max_iterations = 5;
  if (kind == SolverKind::CcpAdmm) config.adaptive_rho = true;
  return config;
}

ContactSolution solve(SolverKind kind, const ContactProblem& problem, const SolverConfig& config) {
  switch (kind) {
    case SolverKind::LcpPgs:
      return solve_lcp_pgs(problem, config);
    case SolverKind::CcpPgs:
      return solve_ccp_pgs(problem, config);
    case SolverKind::CcpAdmm:
      return solve_ccp_admm(problem, config);
    case SolverKind::Raisim:
      return solve_raisim(problem, config);
    case SolverKind::NcpPgs:
      return solve_ncp_pgs(problem, config);
    case SolverKind::Staggered:
      return solve_staggered(problem, config);
  }
  throw std::invalid_argument("unknown solver kind");
}

}  // namespace contactbench
