#include "contactbench/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "contactbench/errors.hpp"

namespace contactbench {

namespace {

constexpr double kUprightCosine = 0.99619469809174555;  // cos(5 deg)

Eigen::Matrix3d skew(const Eigen::Vector3d& v) {
  Eigen::Matrix3d m;
  m << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  return m;
}

// Corner k has sign + on axis a when bit a of k is set.
Eigen::Vector3d corner_offset(const BodyModel& body, int k) {
  Eigen::Vector3d s;
  for (int a = 0; a < 3; ++a) s(a) = (k >> a) & 1 ? 1.0 : -1.0;
  return s.cwiseProduct(body.half_extents);
}

Vector6d wrench_at(const Scene& scene, int body, double time) {
  Vector6d w = Vector6d::Zero();
  for (const ExternalWrench& f : scene.forces) {
    if (f.body == body && time >= f.start && time < f.end) {
      w += f.wrench + f.wrench_rate * (time - f.start);
    }
  }
  return w;
}

bool upright(const RigidBodyState& s) {
  return std::abs((s.orientation * Eigen::Vector3d::UnitZ()).z()) >= kUprightCosine;
}

}  // namespace

BodyModel BodyModel::box(double mass, const Eigen::Vector3d& half_extents) {
  BodyModel b;
  b.mass = mass;
  b.half_extents = half_extents;
  const Eigen::Vector3d h2 = half_extents.cwiseAbs2();
  b.inertia = Eigen::Vector3d(h2.y() + h2.z(), h2.x() + h2.z(), h2.x() + h2.y()) * (mass / 3.0);
  return b;
}

void validate(const Scene& scene) {
  if (!(scene.dt > 0.0)) throw std::invalid_argument("dt must be > 0");
  if (!(scene.mu >= 0.0)) throw std::invalid_argument("mu must be >= 0");
  if (!(scene.restitution >= 0.0 && scene.restitution <= 1.0)) {
    throw std::invalid_argument("restitution must lie in [0, 1]");
  }
  if (!(scene.baumgarte >= 0.0)) throw std::invalid_argument("baumgarte must be >= 0");
  if (!(scene.compliance >= 0.0 && scene.tangential_compliance >= 0.0)) {
    throw std::invalid_argument("compliance must be >= 0");
  }
  if (!(scene.contact_margin >= 0.0)) throw std::invalid_argument("contact_margin must be >= 0");
  if (scene.bodies.size() != scene.initial_states.size()) {
    throw std::invalid_argument("bodies: expected one initial state per body");
  }
  for (const BodyModel& b : scene.bodies) {
    if (!(b.mass > 0.0) || !(b.inertia.array() > 0.0).all() ||
        !(b.half_extents.array() > 0.0).all()) {
      throw std::invalid_argument("bodies: mass, inertia and half_extents must be > 0");
    }
  }
  for (const ExternalWrench& f : scene.forces) {
    if (f.body < 0 || f.body >= static_cast<int>(scene.bodies.size())) {
      throw std::invalid_argument("forces: body index out of range");
    }
  }
}

std::vector<Vector6d> compute_free_velocity(const Scene& scene,
                                            const std::vector<RigidBodyState>& states, double time,
                                            double dt) {
  std::vector<Vector6d> out;
  out.reserve(states.size());
  for (size_t b = 0; b < states.size(); ++b) {
    const BodyModel& body = scene.bodies[b];
    const RigidBodyState& s = states[b];
    const Vector6d w = wrench_at(scene, static_cast<int>(b), time);
    const Eigen::Matrix3d R = s.orientation.toRotationMatrix();
    Vector6d v;
    v.head<3>() = s.linear_velocity + (w.head<3>() / body.mass + scene.gravity) * dt;
    const Eigen::Vector3d& omega = s.angular_velocity;
    const Eigen::Vector3d Iw = body.inertia.cwiseProduct(omega);
    const Eigen::Vector3d torque_body = R.transpose() * w.tail<3>() - omega.cross(Iw);
    const Eigen::Vector3d omega_free = omega + torque_body.cwiseQuotient(body.inertia) * dt;
    v.tail<3>() = R * omega_free;
    out.push_back(v);
  }
  return out;
}

void set_tangent_basis(ContactPatch& patch, double rotation) {
  const Eigen::Vector3d& n = patch.normal;
  Eigen::Vector3d t1 = n.cross(Eigen::Vector3d::UnitX());
  if (t1.norm() < 1e-9) t1 = n.cross(Eigen::Vector3d::UnitY());
  t1.normalize();
  const Eigen::Vector3d t2 = n.cross(t1);
  const double c = std::cos(rotation), s = std::sin(rotation);
  patch.t1 = c * t1 + s * t2;
  patch.t2 = -s * t1 + c * t2;
}

std::vector<ContactPatch> detect_contacts(const Scene& scene,
                                          const std::vector<RigidBodyState>& states) {
  std::vector<ContactPatch> patches;
  const int nb = static_cast<int>(states.size());
  auto emit = [&](int body, int other, int corner, const Eigen::Vector3d& point, double gap) {
    ContactPatch p;
    p.point = point;
    p.normal = Eigen::Vector3d::UnitZ();
    p.gap = gap;
    p.body = body;
    p.other = other;
    p.feature = {body, other, corner};
    set_tangent_basis(p, scene.tangent_rotation);
    patches.push_back(p);
  };

  for (int b = 0; b < nb; ++b) {
    const RigidBodyState& s = states[static_cast<size_t>(b)];
    for (int k = 0; k < 8; ++k) {
      const Eigen::Vector3d w =
          s.position + s.orientation * corner_offset(scene.bodies[static_cast<size_t>(b)], k);
      if (w.z() < scene.contact_margin) emit(b, -1, k, w, w.z());
    }
  }

  for (int i = 0; i < nb; ++i) {
    for (int j = i + 1; j < nb; ++j) {
      const RigidBodyState& si = states[static_cast<size_t>(i)];
      const RigidBodyState& sj = states[static_cast<size_t>(j)];
      const double reach = scene.bodies[static_cast<size_t>(i)].half_extents.norm() +
                           scene.bodies[static_cast<size_t>(j)].half_extents.norm() +
                           scene.contact_margin;
      if ((si.position - sj.position).norm() > reach) continue;
      if (!upright(si) || !upright(sj)) {
        throw UnsupportedGeometry("bodies " + std::to_string(i) + " and " + std::to_string(j) +
                                  " are close but not face-parallel");
      }
      const bool i_above = si.position.z() >= sj.position.z();
      const int up = i_above ? i : j;
      const int low = i_above ? j : i;
      const RigidBodyState& su = states[static_cast<size_t>(up)];
      const RigidBodyState& sl = states[static_cast<size_t>(low)];
      const BodyModel& bl = scene.bodies[static_cast<size_t>(low)];
      // A flipped lower box exposes its -z face on top.
      const double flip = (sl.orientation * Eigen::Vector3d::UnitZ()).z() > 0.0 ? 1.0 : -1.0;
      const double flip_up = (su.orientation * Eigen::Vector3d::UnitZ()).z() > 0.0 ? 1.0 : -1.0;
      for (int k = 0; k < 8; ++k) {
        const Eigen::Vector3d off = corner_offset(scene.bodies[static_cast<size_t>(up)], k);
        if (off.z() * flip_up > 0.0) continue;  // keep the bottom face only
        const Eigen::Vector3d w = su.position + su.orientation * off;
        const Eigen::Vector3d local = sl.orientation.inverse() * (w - sl.position);
        const double gap = flip * local.z() - bl.half_extents.z();
        if (gap >= scene.contact_margin || gap <= -bl.half_extents.z()) continue;
        if (std::abs(local.x()) > bl.half_extents.x() || std::abs(local.y()) > bl.half_extents.y()) {
          continue;
        }
        emit(up, low, k, w, gap);
      }
    }
  }
  std::sort(patches.begin(), patches.end(),
            [](const ContactPatch& a, const ContactPatch& b) { return a.feature < b.feature; });
  return patches;
}

Eigen::MatrixXd build_jacobian(const std::vector<ContactPatch>& patches,
                               const std::vector<RigidBodyState>& states) {
  const auto nc = static_cast<Eigen::Index>(patches.size());
  const auto nb = static_cast<Eigen::Index>(states.size());
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(3 * nc, 6 * nb);
  for (Eigen::Index i = 0; i < nc; ++i) {
    const ContactPatch& p = patches[static_cast<size_t>(i)];
    Eigen::Matrix3d frame;
    frame.row(0) = p.normal.transpose();
    frame.row(1) = p.t1.transpose();
    frame.row(2) = p.t2.transpose();
    auto add = [&](int body, double sign) {
      const Eigen::Vector3d r = p.point - states[static_cast<size_t>(body)].position;
      // Point velocity v + w x r = v - [r]x w.
      J.block<3, 3>(3 * i, 6 * body) += sign * frame;
      J.block<3, 3>(3 * i, 6 * body + 3) += -sign * frame * skew(r);
    };
    add(p.body, 1.0);
    if (p.other >= 0) add(p.other, -1.0);
  }
  return J;
}

Eigen::MatrixXd inverse_mass_matrix(const Scene& scene,
                                    const std::vector<RigidBodyState>& states) {
  const auto nb = static_cast<Eigen::Index>(states.size());
  Eigen::MatrixXd Minv = Eigen::MatrixXd::Zero(6 * nb, 6 * nb);
  for (Eigen::Index b = 0; b < nb; ++b) {
    const BodyModel& body = scene.bodies[static_cast<size_t>(b)];
    const Eigen::Matrix3d R = states[static_cast<size_t>(b)].orientation.toRotationMatrix();
    Minv.block<3, 3>(6 * b, 6 * b) = Eigen::Matrix3d::Identity() / body.mass;
    Minv.block<3, 3>(6 * b + 3, 6 * b + 3) =
        R * body.inertia.cwiseInverse().asDiagonal() * R.transpose();
  }
  return Minv;
}

Eigen::MatrixXd assemble_delassus(const Eigen::MatrixXd& J, const Scene& scene,
                                  const std::vector<RigidBodyState>& states) {
  if (J.cols() != 6 * static_cast<Eigen::Index>(states.size())) {
    throw std::invalid_argument("jacobian: expected 6 columns per body");
  }
  const Eigen::MatrixXd G = J * inverse_mass_matrix(scene, states) * J.transpose();
  return 0.5 * (G + G.transpose());
}

Eigen::VectorXd compose_target_velocity(const std::vector<ContactPatch>& patches,
                                        const Eigen::VectorXd& pre_impact_velocity,
                                        const Scene& scene) {
  const auto nc = static_cast<Eigen::Index>(patches.size());
  if (pre_impact_velocity.size() != 3 * nc) {
    throw std::invalid_argument("pre_impact_velocity: expected 3 entries per contact");
  }
  Eigen::VectorXd target = Eigen::VectorXd::Zero(3 * nc);
  for (Eigen::Index i = 0; i < nc; ++i) {
    const double bounce = -scene.restitution * pre_impact_velocity(3 * i);
    const double push = scene.baumgarte * std::max(0.0, -patches[static_cast<size_t>(i)].gap);
    target(3 * i) = scene.combine == TargetCombine::Max ? std::max(bounce, push)
                                                        : std::max(0.0, bounce) + push;
  }
  return target;
}

Eigen::VectorXd generalized_velocity(const std::vector<RigidBodyState>& states) {
  Eigen::VectorXd v(6 * static_cast<Eigen::Index>(states.size()));
  for (size_t b = 0; b < states.size(); ++b) {
    const auto o = static_cast<Eigen::Index>(6 * b);
    v.segment<3>(o) = states[b].linear_velocity;
    v.segment<3>(o + 3) = states[b].orientation * states[b].angular_velocity;
  }
  return v;
}

PreparedStep prepare_step(const Scene& scene, const std::vector<RigidBodyState>& states,
                          double time, const WarmCache* warm) {
  PreparedStep out;
  out.patches = detect_contacts(scene, states);
  const std::vector<Vector6d> free = compute_free_velocity(scene, states, time, scene.dt);
  out.free_velocity.resize(6 * static_cast<Eigen::Index>(states.size()));
  for (size_t b = 0; b < free.size(); ++b) {
    out.free_velocity.segment<6>(static_cast<Eigen::Index>(6 * b)) = free[b];
  }
  const auto nc = static_cast<Eigen::Index>(out.patches.size());
  if (nc == 0) return out;

  out.jacobian = build_jacobian(out.patches, states);
  out.inverse_mass = inverse_mass_matrix(scene, states);
  const Eigen::MatrixXd& J = out.jacobian;
  Eigen::MatrixXd G = J * out.inverse_mass * J.transpose();
  G = 0.5 * (G + G.transpose());
  const Eigen::VectorXd target =
      compose_target_velocity(out.patches, J * generalized_velocity(states), scene);
  std::optional<Eigen::VectorXd> R;
  if (scene.compliance > 0.0 || scene.tangential_compliance > 0.0) {
    R = Eigen::VectorXd(3 * nc);
    for (Eigen::Index i = 0; i < nc; ++i) {
      (*R).segment<3>(3 * i) << scene.compliance, scene.tangential_compliance,
          scene.tangential_compliance;
    }
  }
  out.problem =
      ContactProblem(G, J * out.free_velocity - target, std::vector<double>(nc, scene.mu), R);

  if (warm) {
    WarmStart ws;
    ws.lambda = Eigen::VectorXd::Zero(3 * nc);
    Eigen::VectorXd dual = Eigen::VectorXd::Zero(3 * nc);
    bool all_duals = !warm->dual.empty();
    for (Eigen::Index i = 0; i < nc; ++i) {
      const FeatureId& id = out.patches[static_cast<size_t>(i)].feature;
      if (auto it = warm->lambda.find(id); it != warm->lambda.end()) {
        ws.lambda.segment<3>(3 * i) = it->second;
      }
      if (auto it = warm->dual.find(id); it != warm->dual.end()) {
        dual.segment<3>(3 * i) = it->second;
      } else {
        all_duals = false;
      }
    }
    if (all_duals) ws.dual = dual;
    if (warm->rho > 0.0) ws.rho = warm->rho;
    out.warm_start = ws;
  }
  return out;
}

StepResult complete_step(const Scene& scene, const std::vector<RigidBodyState>& states,
                         PreparedStep prepared, ContactSolution solution) {
  const double dt = scene.dt;
  StepResult out;
  Eigen::VectorXd v = std::move(prepared.free_velocity);
  const auto nc = static_cast<Eigen::Index>(prepared.patches.size());
  if (nc > 0) {
    v += prepared.inverse_mass * (prepared.jacobian.transpose() * solution.lambda);
    for (Eigen::Index i = 0; i < nc; ++i) {
      const FeatureId& id = prepared.patches[static_cast<size_t>(i)].feature;
      out.cache.lambda[id] = solution.lambda.segment<3>(3 * i);
      if (solution.dual.size() == 3 * nc) out.cache.dual[id] = solution.dual.segment<3>(3 * i);
    }
    out.cache.rho = solution.rho;
  }
  out.states = states;
  for (size_t b = 0; b < states.size(); ++b) {
    RigidBodyState& s = out.states[b];
    const auto o = static_cast<Eigen::Index>(6 * b);
    s.linear_velocity = v.segment<3>(o);
    s.angular_velocity = s.orientation.inverse() * Eigen::Vector3d(v.segment<3>(o + 3));
    s.position += dt * s.linear_velocity;
    const Eigen::Vector3d rotvec = dt * s.angular_velocity;
    const double angle = rotvec.norm();
    if (angle > 0.0) {
      s.orientation = s.orientation * Eigen::Quaterniond(Eigen::AngleAxisd(angle, rotvec / angle));
    }
    s.orientation.normalize();
  }
  out.patches = std::move(prepared.patches);
  out.problem = std::move(prepared.problem);
  out.solution = std::move(solution);
  return out;
}

StepResult step_scene(const Scene& scene, const std::vector<RigidBodyState>& states, double time,
                      SolverKind solver, const SolverConfig& config, const WarmCache* warm) {
  PreparedStep prepared = prepare_step(scene, states, time, warm);
  SolverConfig cfg = config;
  if (prepared.warm_start) cfg.warm_start = prepared.warm_start;
  ContactSolution solution = solve(solver, prepared.problem, cfg);
  return complete_step(scene, states, std::move(prepared), std::move(solution));
}

double mechanical_energy(const Scene& scene, const std::vector<RigidBodyState>& states) {
  double e = 0.0;
  for (size_t b = 0; b < states.size(); ++b) {
    const BodyModel& body = scene.bodies[b];
    const RigidBodyState& s = states[b];
    e += 0.5 * body.mass * s.linear_velocity.squaredNorm();
    e += 0.5 * s.angular_velocity.dot(body.inertia.cwiseProduct(s.angular_velocity));
    e -= body.mass * scene.gravity.dot(s.position);
  }
  return e;
}

}  // namespace contactbench
