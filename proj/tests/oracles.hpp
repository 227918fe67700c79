#pragma once

// Reference computations used only by the tests. Nothing here calls into
// the library, so agreement is evidence rather than tautology.

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

inline double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

/// He_n(x) / sqrt(n!) from the explicit sum
/// He_n(x) = n! sum_m (-1)^m x^{n-2m} / (m! (n-2m)! 2^m), in long double.
/// Accurate for moderate n and |x|.
inline double hermite_explicit(unsigned n, double xd) {
  const long double x = xd;
  long double sum = 0.0L;
  for (unsigned m = 0; 2 * m <= n; ++m) {
    const long double log_mag = std::lgamma(static_cast<long double>(n) + 1) -
                                std::lgamma(static_cast<long double>(m) + 1) -
                                std::lgamma(static_cast<long double>(n - 2 * m) + 1) - m * std::log(2.0L);
    long double term = std::exp(log_mag) * std::pow(x, static_cast<long double>(n - 2 * m));
    if (m % 2 == 1) term = -term;
    sum += term;
  }
  return static_cast<double>(sum / std::sqrt(std::tgamma(static_cast<long double>(n) + 1)));
}

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
struct Legendre {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit Legendre(unsigned n) : nodes(n), weights(n) {
    for (unsigned i = 0; i < n; ++i) {
      long double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      long double dp = 0.0L;
      for (int iter = 0; iter < 100; ++iter) {
        long double p0 = 1.0L, p1 = x;
        for (unsigned k = 2; k <= n; ++k) {
          const long double p2 = ((2.0L * k - 1.0L) * x * p1 - (k - 1.0L) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0L);
        const long double dx = p1 / dp;
        x -= dx;
        if (std::fabs(dx) < 1e-19L) break;
      }
      nodes[i] = static_cast<double>(x);
      weights[i] = static_cast<double>(2.0L / ((1.0L - x * x) * dp * dp));
    }
  }
};

/// Composite Gauss-Legendre integral of f over [a, b].
inline double integrate(const std::function<double(double)>& f, double a, double b, unsigned panels = 64,
                        unsigned order = 24) {
  static const Legendre rule(24);
  const Legendre local = order == 24 ? rule : Legendre(order);
  const double h = (b - a) / panels;
  long double total = 0.0L;
  for (unsigned p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    const double mid = lo + 0.5 * h;
    for (unsigned i = 0; i < local.nodes.size(); ++i) {
      total += local.weights[i] * f(mid + 0.5 * h * local.nodes[i]);
    }
  }
  return static_cast<double>(total * 0.5L * h);
}

/// E[g(Z)] for Z ~ N(0,1) split at the given breakpoints, truncated to [-L, L].
inline double gaussian_expectation(const std::function<double(double)>& g, std::vector<double> breaks = {},
                                   double L = 16.0) {
  std::vector<double> cuts{-L};
  for (double b : breaks) {
    if (b > -L && b < L) cuts.push_back(b);
  }
  cuts.push_back(L);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    total += integrate([&](double x) { return g(x) * normal_pdf(x); }, cuts[i], cuts[i + 1]);
  }
  return total;
}

/// Coefficient E[f h_n] of f = 2*1{x <= theta} - 1 by panel quadrature on
/// each side of the jump.
inline double halfspace_coefficient(unsigned n, double theta) {
  return gaussian_expectation(
      [&](double x) { return (x <= theta ? 1.0 : -1.0) * hermite_explicit(n, x); }, {theta});
}

/// Smoothing parameter and degree by brute-force search over t:
/// rho = 1 - min{1, eps^2/(16 pi gamma^2)}, smallest t with
/// (t+1)(1-rho) >= log(2/eps).
struct Params {
  double rho;
  std::uint64_t t;
};

inline Params parameter_rule(double gamma, double eps) {
  const double delta = gamma == 0.0 ? 1.0 : std::min(1.0, eps * eps / (16.0 * std::numbers::pi * gamma * gamma));
  const double rho = 1.0 - delta;
  if (rho == 0.0) return {0.0, 0};  // constant g, any degree is exact
  const double target = std::log(2.0 / eps);
  std::uint64_t t = 0;
  while (static_cast<double>(t + 1) * (1.0 - rho) < target) ++t;
  return {rho, t};
}

}  // namespace oracle
