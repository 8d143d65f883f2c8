#include <cmath>
#include <numbers>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "contactbench/errors.hpp"
#include "contactbench/solvers.hpp"
#include "solver-common.hpp"

namespace contactbench {

namespace {

constexpr int kScanSamples = 64;
constexpr double kAngleTolerance = 1e-10;

// lam(theta) = r(theta) (1/mu, cos theta, sin theta) with r chosen so that
// G_N lam + g_N = 0. Valid where the denominator D(theta) is positive.
struct Ellipse {
  const Eigen::Matrix3d& G;
  const Eigen::Vector3d& g;
  double mu;

  double denominator(double th) const {
    return G(0, 0) / mu + G(0, 1) * std::cos(th) + G(0, 2) * std::sin(th);
  }
  Eigen::Vector3d point(double th) const {
    const double r = -g(0) / denominator(th);
    return r * Eigen::Vector3d(1.0 / mu, std::cos(th), std::sin(th));
  }
  double value(double th) const {
    const Eigen::Vector3d lam = point(th);
    return 0.5 * lam.dot(G * lam) + g.dot(lam);
  }
  double derivative(double th) const {
    const double D = denominator(th);
    const double r = -g(0) / D;
    const double dD = -G(0, 1) * std::sin(th) + G(0, 2) * std::cos(th);
    const Eigen::Vector3d w(1.0 / mu, std::cos(th), std::sin(th));
    const Eigen::Vector3d dw(0.0, -std::sin(th), std::cos(th));
    const Eigen::Vector3d dlam = (-r * dD / D) * w + r * dw;
    return (G * point(th) + g).dot(dlam);
  }
};

double golden_section(const Ellipse& e, double lo, double hi) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
  double f1 = e.value(x1), f2 = e.value(x2);
  while (b - a > kAngleTolerance) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = e.value(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = e.value(x2);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

Eigen::Vector3d bisection_sliding(const Eigen::Matrix3d& G, const Eigen::Vector3d& g_tilde,
                                  const FrictionCone& cone, const Eigen::Vector3d& lambda_v0,
                                  int contact) {
  if (g_tilde(0) > 0.0) {
    throw SlidingSolveError(contact, "normal constraint unsatisfiable inside the cone");
  }
  if (!(G(0, 0) > 0.0)) throw SlidingSolveError(contact, "zero normal diagonal entry");
  if (g_tilde(0) == 0.0) return Eigen::Vector3d::Zero();
  const double mu = cone.mu();
  if (mu == 0.0) return Eigen::Vector3d(-g_tilde(0) / G(0, 0), 0.0, 0.0);

  const Ellipse e{G, g_tilde, mu};
  const double coupling = std::hypot(G(0, 1), G(0, 2));
  const double psi = std::atan2(G(0, 2), G(0, 1));
  const double pi = std::numbers::pi;
  // Either the whole circle of angles is admissible or an open arc around psi.
  const bool closed = G(0, 0) / mu > coupling * (1.0 + 1e-12);
  const double half_width = closed ? pi : std::acos(-G(0, 0) / (mu * coupling));

  std::vector<double> samples;
  for (int k = 0; k < kScanSamples; ++k) {
    const double frac = closed ? static_cast<double>(k) / kScanSamples
                               : (static_cast<double>(k) + 0.5) / kScanSamples;
    samples.push_back(psi - half_width + 2.0 * half_width * frac);
  }
  const double step = 2.0 * half_width / kScanSamples;
  int best = -1;
  double best_value = 0.0;
  for (int k = 0; k < kScanSamples; ++k) {
    if (!(e.denominator(samples[static_cast<size_t>(k)]) > 0.0)) continue;
    const double v = e.value(samples[static_cast<size_t>(k)]);
    if (best < 0 || v < best_value) {
      best = k;
      best_value = v;
    }
  }
  if (best < 0) throw SlidingSolveError(contact, "no admissible sliding direction");
  double center = samples[static_cast<size_t>(best)];
  // The unconstrained minimizer's direction seeds the bracket when it beats the scan.
  const double theta_v0 = std::atan2(lambda_v0(2), lambda_v0(1));
  for (double shift : {-2.0 * pi, 0.0, 2.0 * pi}) {
    const double th = theta_v0 + shift;
    if (std::abs(th - psi) < half_width && e.denominator(th) > 0.0 && e.value(th) < best_value) {
      best_value = e.value(th);
      center = th;
    }
  }

  double lo = center - step;
  double hi = center + step;
  if (!closed) {
    const double margin = 1e-9 * half_width;
    lo = std::max(lo, psi - half_width + margin);
    hi = std::min(hi, psi + half_width - margin);
  }
  double theta;
  if (e.derivative(lo) < 0.0 && e.derivative(hi) > 0.0) {
    while (hi - lo > kAngleTolerance) {
      const double mid = 0.5 * (lo + hi);
      (e.derivative(mid) > 0.0 ? hi : lo) = mid;
    }
    theta = 0.5 * (lo + hi);
  } else {
    theta = golden_section(e, lo, hi);
  }
  return e.point(theta);
}

ContactSolution solve_raisim(const ContactProblem& problem, const SolverConfig& config) {
  detail::Stopwatch clock;
  validate(config);
  const int nc = problem.num_contacts();
  if (nc == 0) return detail::empty_solution();
  const Eigen::MatrixXd& G = problem.effective_delassus();
  const Eigen::VectorXd& g = problem.free_velocity();

  std::vector<Eigen::Matrix3d> blocks(static_cast<size_t>(nc));
  std::vector<Eigen::FullPivLU<Eigen::Matrix3d>> inverses;
  for (int i = 0; i < nc; ++i) {
    blocks[static_cast<size_t>(i)] = problem.block(i, i);
    Eigen::FullPivLU<Eigen::Matrix3d> lu(blocks[static_cast<size_t>(i)]);
    lu.setThreshold(1e-12);
    if (!lu.isInvertible()) throw SingularBlockError(i, "diagonal block is not invertible");
    inverses.push_back(lu);
  }

  auto signorini = [&](const Eigen::VectorXd& lam, const Eigen::VectorXd& c) {
    double worst = 0.0;
    for (int i = 0; i < nc; ++i) {
      if (lam(3 * i) > config.eps_abs) worst = std::max(worst, std::abs(c(3 * i)));
    }
    return worst;
  };

  Eigen::VectorXd lam = detail::initial_lambda(problem, config);
  SolveTrace trace;
  double stop = 0.0;
  double alpha = config.raisim.alpha0;
  bool converged = false;
  int it = 0;
  Eigen::VectorXd lam_prev;
  while (it < config.max_iterations) {
    ++it;
    lam_prev = lam;
    for (int i = 0; i < nc; ++i) {
      const Eigen::Matrix3d& Gii = blocks[static_cast<size_t>(i)];
      const Eigen::Vector3d li = lam.segment<3>(3 * i);
      const Eigen::Vector3d g_tilde =
          G.middleRows<3>(3 * i) * lam + g.segment<3>(3 * i) - Gii * li;
      Eigen::Vector3d target;
      if (g_tilde(0) > 0.0) {
        target.setZero();
        ++trace.branches.takeoff;
      } else {
        const Eigen::Vector3d v0 = -inverses[static_cast<size_t>(i)].solve(g_tilde);
        if (problem.cone(i).contains(v0)) {
          target = v0;
          ++trace.branches.stiction;
        } else {
          target = bisection_sliding(Gii, g_tilde, problem.cone(i), v0, i);
          ++trace.branches.sliding;
        }
      }
      lam.segment<3>(3 * i) = alpha * li + (1.0 - alpha) * target;
      alpha = config.raisim.gamma * alpha + (1.0 - config.raisim.gamma) * config.raisim.alpha_min;
    }
    const Eigen::VectorXd c = problem.contact_velocity(lam);
    stop = std::max((lam - lam_prev).cwiseAbs().maxCoeff(), signorini(lam, c));
    detail::record_iteration(trace, config, lam, compute_residuals(problem, lam).ncp_criterion,
                             stop);
    if (stop <= config.eps_abs) {
      converged = true;
      break;
    }
  }
  return detail::finish(problem, std::move(lam), it, converged, stop, std::move(trace), clock);
}

}  // namespace contactbench
