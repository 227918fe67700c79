#pragma once

#include <vector>

namespace nnapprox {

/// Gauss-Hermite rule for the standard Gaussian measure gamma_1:
/// sum_i weights[i] * f(nodes[i]) ~ E[f(Z)], exact for polynomials of
/// degree <= 2n-1. Weights sum to one.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

QuadratureRule gauss_hermite(std::size_t n);

}  // namespace nnapprox
