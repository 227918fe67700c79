#include "nnapprox/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "nnapprox/errors.hpp"
#include "nnapprox/hermite.hpp"

namespace nnapprox {

QuadratureRule gauss_hermite(std::size_t n) {
  if (n == 0) throw InvalidArgument("quadrature needs at least one node");
  // Golub-Welsch for the orthonormal recurrence gives starting nodes; Newton
  // on h_n polishes them, and the Christoffel sum gives weights with full
  // relative accuracy in the tails.
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  Eigen::VectorXd sub(static_cast<Eigen::Index>(n > 1 ? n - 1 : 0));
  for (std::size_t k = 1; k < n; ++k) sub[static_cast<Eigen::Index>(k - 1)] = std::sqrt(static_cast<double>(k));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);

  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  std::vector<double> table(n + 1);
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    double x = solver.eigenvalues()[static_cast<Eigen::Index>(i)];
    for (int iter = 0; iter < 3; ++iter) {
      hermite_table(x, table);
      // h_n' = sqrt(n) h_{n-1}
      const double step = table[n] / (sqrt_n * table[n - 1]);
      x -= step;
      if (std::abs(step) <= 1e-16 * (1.0 + std::abs(x))) break;
    }
    hermite_table(x, table);
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += table[k] * table[k];
    rule.nodes[i] = x;
    rule.weights[i] = 1.0 / s;
  }
  return rule;
}

}  // namespace nnapprox
