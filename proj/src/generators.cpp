#include "contactbench/generators.hpp"

#include <array>

namespace contactbench {
namespace {

Eigen::MatrixXd uniform_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  Eigen::MatrixXd A(rows, cols);
  // Column-major fill order keeps sequences stable across Eigen versions.
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) A(r, c) = u(rng);
  }
  return A;
}

Eigen::MatrixXd spd(std::mt19937_64& rng, Eigen::Index n) {
  const Eigen::MatrixXd A = uniform_matrix(rng, n, n);
  return A.transpose() * A + 0.1 * Eigen::MatrixXd::Identity(n, n);
}

}  // namespace

ContactProblem random_single_contact(std::mt19937_64& rng, bool zero_coupling) {
  static constexpr std::array<double, 4> kMus{0.0, 0.3, 0.5, 1.0};
  Eigen::MatrixXd G = spd(rng, 3);
  if (zero_coupling) {
    G(0, 1) = G(1, 0) = 0.0;
    G(0, 2) = G(2, 0) = 0.0;
  }
  const Eigen::VectorXd g = uniform_matrix(rng, 3, 1);
  const double mu = kMus[std::uniform_int_distribution<size_t>(0, kMus.size() - 1)(rng)];
  return ContactProblem(G, g, {mu});
}

ContactProblem random_frictionless(std::mt19937_64& rng, int num_contacts) {
  const Eigen::Index n = 3 * num_contacts;
  const Eigen::MatrixXd G = spd(rng, n);
  const Eigen::VectorXd g = uniform_matrix(rng, n, 1);
  return ContactProblem(G, g, std::vector<double>(static_cast<size_t>(num_contacts), 0.0));
}

ContactProblem coupled_sliding_problem() {
  Eigen::Matrix3d G;
  G << 1.0, 0.4, -0.3,
       0.4, 1.2, 0.1,
       -0.3, 0.1, 0.9;
  return ContactProblem(G, Eigen::Vector3d(-1.0, -2.0, 0.5), {0.5});
}

}  // namespace contactbench
