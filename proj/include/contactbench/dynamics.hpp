#ifndef CONTACTBENCH_DYNAMICS_HPP
#define CONTACTBENCH_DYNAMICS_HPP

#include <compare>
#include <map>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "contactbench/contact-problem.hpp"
#include "contactbench/contact-solution.hpp"
#include "contactbench/solvers.hpp"

namespace contactbench {

using Vector6d = Eigen::Matrix<double, 6, 1>;

struct BodyModel {
  double mass = 1.0;
  Eigen::Vector3d inertia = Eigen::Vector3d::Constant(1.0 / 6.0);  ///< body-frame diagonal
  Eigen::Vector3d half_extents = Eigen::Vector3d::Constant(0.5);

  /// Uniform-density box: I_x = m (h_y^2 + h_z^2) / 3 and cyclic.
  static BodyModel box(double mass, const Eigen::Vector3d& half_extents);
};

struct RigidBodyState {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Quaterniond orientation = Eigen::Quaterniond::Identity();
  Eigen::Vector3d linear_velocity = Eigen::Vector3d::Zero();
  Eigen::Vector3d angular_velocity = Eigen::Vector3d::Zero();  ///< body frame
};

/// World-frame force and torque at the COM, active on [start, end):
/// wrench + wrench_rate * (t - start).
struct ExternalWrench {
  int body = 0;
  double start = 0.0;
  double end = 0.0;
  Vector6d wrench = Vector6d::Zero();
  Vector6d wrench_rate = Vector6d::Zero();
};

enum class TargetCombine { Max, Sum };

struct Scene {
  std::vector<BodyModel> bodies;
  std::vector<RigidBodyState> initial_states;
  Eigen::Vector3d gravity{0.0, 0.0, -9.81};
  double mu = 0.5;
  double restitution = 0.0;
  double baumgarte = 0.0;               ///< 1/s
  double compliance = 0.0;              ///< normal entries of R
  double tangential_compliance = 0.0;   ///< tangential entries of R
  double dt = 1e-3;
  std::vector<ExternalWrench> forces;
  double contact_margin = 1e-4;
  /// Rotation of (T1, T2) about N, radians. Orients the pyramid facets.
  double tangent_rotation = 0.0;
  TargetCombine combine = TargetCombine::Max;
};

/// Throws std::invalid_argument when a field is out of range.
void validate(const Scene& scene);

/// (body, other, corner); other = -1 for the floor.
struct FeatureId {
  int body = 0;
  int other = -1;
  int corner = 0;
  auto operator<=>(const FeatureId&) const = default;
};

struct ContactPatch {
  Eigen::Vector3d point = Eigen::Vector3d::Zero();
  Eigen::Vector3d normal = Eigen::Vector3d::UnitZ();
  Eigen::Vector3d t1 = Eigen::Vector3d::UnitY();
  Eigen::Vector3d t2 = -Eigen::Vector3d::UnitX();
  double gap = 0.0;  ///< signed separation along normal
  int body = 0;      ///< receives +impulse
  int other = -1;    ///< receives -impulse; -1 is the floor
  FeatureId feature;
};

/// Per-feature impulses and ADMM multipliers from the previous step.
struct WarmCache {
  std::map<FeatureId, Eigen::Vector3d> lambda;
  std::map<FeatureId, Eigen::Vector3d> dual;
  double rho = 0.0;
};

/// Per-body (linear velocity, world angular velocity) after external forces,
/// gravity and the gyroscopic term over dt.
std::vector<Vector6d> compute_free_velocity(const Scene& scene,
                                            const std::vector<RigidBodyState>& states, double time,
                                            double dt);

/// Box-floor corners and face-parallel box-on-box corners, sorted by feature id.
/// Throws UnsupportedGeometry for nearby boxes that are not both upright within 5 degrees.
std::vector<ContactPatch> detect_contacts(const Scene& scene,
                                          const std::vector<RigidBodyState>& states);

/// Tangent basis T1 = normalize(N x e_x) (N x e_y if degenerate), T2 = N x T1,
/// then both rotated by `rotation` about N.
void set_tangent_basis(ContactPatch& patch, double rotation);

/// 3 n_c x 6 n_b; columns per body are (linear, world angular).
Eigen::MatrixXd build_jacobian(const std::vector<ContactPatch>& patches,
                               const std::vector<RigidBodyState>& states);

/// Block-diagonal inverse mass with world-frame inertia.
Eigen::MatrixXd inverse_mass_matrix(const Scene& scene,
                                    const std::vector<RigidBodyState>& states);

/// G = J M^-1 J', symmetrized.
Eigen::MatrixXd assemble_delassus(const Eigen::MatrixXd& J, const Scene& scene,
                                  const std::vector<RigidBodyState>& states);

/// Normal targets max(-e c_N, K max(0, -gap)) (or their sum); tangential targets 0.
Eigen::VectorXd compose_target_velocity(const std::vector<ContactPatch>& patches,
                                        const Eigen::VectorXd& pre_impact_velocity,
                                        const Scene& scene);

/// Stacked (linear, world angular) velocities of all bodies.
Eigen::VectorXd generalized_velocity(const std::vector<RigidBodyState>& states);

/// Everything a step needs before the solve.
struct PreparedStep {
  std::vector<ContactPatch> patches;
  Eigen::MatrixXd jacobian;
  Eigen::MatrixXd inverse_mass;
  Eigen::VectorXd free_velocity;  ///< stacked per-body (linear, world angular)
  ContactProblem problem;
  /// Feature-matched warm start; empty for a cold start.
  std::optional<WarmStart> warm_start;
};

PreparedStep prepare_step(const Scene& scene, const std::vector<RigidBodyState>& states,
                          double time, const WarmCache* warm);

struct StepResult {
  std::vector<RigidBodyState> states;
  std::vector<ContactPatch> patches;
  ContactProblem problem;
  ContactSolution solution;
  WarmCache cache;
};

/// Applies the impulses of `solution` and integrates positions.
StepResult complete_step(const Scene& scene, const std::vector<RigidBodyState>& states,
                         PreparedStep prepared, ContactSolution solution);

/// One time step from `states` at `time`. A null warm cache means a cold start.
StepResult step_scene(const Scene& scene, const std::vector<RigidBodyState>& states, double time,
                      SolverKind solver, const SolverConfig& config, const WarmCache* warm);

/// Sum of 1/2 m |v|^2 + 1/2 w' I w - m gravity . p.
double mechanical_energy(const Scene& scene, const std::vector<RigidBodyState>& states);

}  // namespace contactbench

#endif
