#include <doctest.h>

#include <cmath>
#include <random>

#include "nnapprox/errors.hpp"
#include "nnapprox/hermite.hpp"
#include "nnapprox/quadrature.hpp"
#include "oracles.hpp"

using namespace nnapprox;

namespace {

HermiteExpansion random_expansion(std::size_t dim, std::uint32_t degree, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  HermiteExpansion e(dim);
  for (const auto& a : enumerate_multi_indices(dim, degree)) e.add(a, normal(rng));
  return e;
}

// E[F(X)] under gamma_dim by tensor Gauss-Hermite.
template <class F>
double tensor_expectation(std::size_t dim, const QuadratureRule& rule, F&& f) {
  const std::size_t n = rule.nodes.size();
  std::vector<std::size_t> idx(dim, 0);
  std::vector<double> x(dim);
  double total = 0.0;
  while (true) {
    double w = 1.0;
    for (std::size_t i = 0; i < dim; ++i) {
      x[i] = rule.nodes[idx[i]];
      w *= rule.weights[idx[i]];
    }
    total += w * f(x);
    std::size_t k = 0;
    while (k < dim && ++idx[k] == n) idx[k++] = 0;
    if (k == dim) break;
  }
  return total;
}

}  // namespace

TEST_CASE("hermite_eval matches the explicit sum") {
  for (unsigned n = 0; n <= 25; ++n) {
    for (double x : {-3.5, -1.0, -0.2, 0.0, 0.7, 2.0, 4.1}) {
      const double ref = oracle::hermite_explicit(n, x);
      CHECK(hermite_eval(n, x) == doctest::Approx(ref).epsilon(1e-11).scale(1.0));
    }
  }
}

TEST_CASE("hermite_table agrees with hermite_eval") {
  std::vector<double> table(60);
  hermite_table(1.3, table);
  for (unsigned n = 0; n < table.size(); ++n) CHECK(table[n] == doctest::Approx(hermite_eval(n, 1.3)).epsilon(1e-13));
}

TEST_CASE("orthonormality under panel quadrature") {
  for (unsigned m = 0; m <= 20; ++m) {
    for (unsigned n = m; n <= 20; ++n) {
      const double ip =
          oracle::gaussian_expectation([&](double x) { return hermite_eval(m, x) * hermite_eval(n, x); });
      CHECK(std::fabs(ip - (m == n ? 1.0 : 0.0)) <= 1e-10);
    }
  }
}

TEST_CASE("gauss_hermite integrates polynomials exactly and weights sum to one") {
  const auto rule = gauss_hermite(64);
  REQUIRE(rule.nodes.size() == 64);
  double wsum = 0.0;
  for (double w : rule.weights) wsum += w;
  CHECK(wsum == doctest::Approx(1.0).epsilon(1e-13));
  for (unsigned m = 0; m <= 20; ++m) {
    for (unsigned n = 0; n <= 20; ++n) {
      double ip = 0.0;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        ip += rule.weights[i] * hermite_eval(m, rule.nodes[i]) * hermite_eval(n, rule.nodes[i]);
      }
      CHECK(std::fabs(ip - (m == n ? 1.0 : 0.0)) <= 1e-10);
    }
  }
  // Nodes are symmetric about zero.
  for (std::size_t i = 0; i < 32; ++i) CHECK(rule.nodes[i] == doctest::Approx(-rule.nodes[63 - i]).epsilon(1e-13));
}

TEST_CASE("multi-index counting and graded enumeration") {
  CHECK(count_multi_indices(0, 3) == 1);
  CHECK(count_multi_indices(5, 1) == 6);
  CHECK(count_multi_indices(10, 3) == 286);
  CHECK(count_multi_indices(4, 0) == 1);
  CHECK(count_multi_indices(1'000'000'000, 40) == UINT64_MAX);
  for (std::size_t d = 1; d <= 4; ++d) {
    for (std::uint32_t t = 0; t <= 6; ++t) {
      const auto all = enumerate_multi_indices(d, t);
      CHECK(all.size() == count_multi_indices(t, d));
      for (std::size_t i = 1; i < all.size(); ++i) {
        CHECK(all[i - 1] < all[i]);
        CHECK(all[i - 1].total_degree() <= all[i].total_degree());
      }
    }
  }
  CHECK(MultiIndex({2, 0}) < MultiIndex({0, 3}));
  CHECK(MultiIndex::unit(3, 1, 4).total_degree() == 4);
}

TEST_CASE("expansion stores no zero coefficients") {
  HermiteExpansion e(2);
  const MultiIndex a({1, 2});
  e.add(a, 0.5);
  e.add(a, -0.5);
  CHECK(e.empty());
  CHECK(e.degree() == 0);
  CHECK(HermiteExpansion::from_dense_1d(std::vector<double>{1.0, 0.0, 2.0}).size() == 2);
}

TEST_CASE("ou_apply is a semigroup and scales by rho^degree") {
  std::mt19937_64 rng(3);
  for (std::size_t d = 1; d <= 3; ++d) {
    const auto e = random_expansion(d, 8, rng);
    for (double r1 : {0.0, 0.3, 0.9, 1.0}) {
      for (double r2 : {0.5, 0.99}) {
        const auto two_step = ou_apply(ou_apply(e, r1), r2);
        const auto one_step = ou_apply(e, r1 * r2);
        for (const auto& [a, c] : e.terms()) {
          const double expected = std::pow(r1 * r2, static_cast<double>(a.total_degree())) * c;
          CHECK(std::fabs(two_step.coefficient(a) - expected) <= 1e-12);
          CHECK(std::fabs(one_step.coefficient(a) - expected) <= 1e-12);
        }
      }
    }
    CHECK(ou_apply(e, 1.0) == e);
  }
  const auto e = random_expansion(1, 3, rng);
  CHECK_THROWS_AS(ou_apply(e, -0.1), InvalidArgument);
  CHECK_THROWS_AS(ou_apply(e, 1.1), InvalidArgument);
}

TEST_CASE("truncate keeps exactly the low-degree terms") {
  std::mt19937_64 rng(4);
  const auto e = random_expansion(2, 9, rng);
  const auto t = truncate(e, 4);
  CHECK(t.degree() == 4);
  CHECK(t.size() == count_multi_indices(4, 2));
  for (const auto& [a, c] : t.terms()) CHECK(c == e.coefficient(a));
}

TEST_CASE("Parseval: l2_norm matches quadrature of the square") {
  std::mt19937_64 rng(5);
  for (std::size_t d = 1; d <= 3; ++d) {
    const auto rule = gauss_hermite(d == 3 ? 16 : 24);
    for (std::uint32_t deg : {0u, 3u, 10u}) {
      const auto e = random_expansion(d, deg, rng);
      const ExpansionEvaluator ev(e);
      std::vector<double> scratch(ev.scratch_size());
      const double quad = tensor_expectation(d, rule, [&](const std::vector<double>& x) {
        const double v = ev(x, scratch);
        return v * v;
      });
      const double norm = l2_norm(e);
      CHECK(std::fabs(norm * norm - quad) <= 1e-8 * quad);
    }
  }
}

TEST_CASE("evaluator agrees with direct tensor products") {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> normal;
  const auto e = random_expansion(3, 6, rng);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> x{normal(rng), normal(rng), normal(rng)};
    double direct = 0.0;
    for (const auto& [a, c] : e.terms()) {
      double b = c;
      for (std::size_t i = 0; i < 3; ++i) b *= oracle::hermite_explicit(a[i], x[i]);
      direct += b;
    }
    CHECK(expansion_eval(e, x) == doctest::Approx(direct).epsilon(1e-10));
  }
}

TEST_CASE("linearize_pair matches triple-product quadrature") {
  for (std::uint32_t a = 0; a <= 12; ++a) {
    for (std::uint32_t b = 0; b <= 12; ++b) {
      const auto lin = linearize_pair(a, b);
      for (std::uint32_t m = 0; m <= a + b; ++m) {
        const double quad = oracle::gaussian_expectation(
            [&](double x) { return hermite_eval(a, x) * hermite_eval(b, x) * hermite_eval(m, x); });
        const auto it = lin.find(m);
        const double got = it == lin.end() ? 0.0 : it->second;
        CHECK(std::fabs(got - quad) <= 1e-9);
      }
    }
  }
}

TEST_CASE("linearize_pair stays finite at high degree") {
  // E[h_a^2 h_b^2] grows exponentially, so this is near the largest
  // pair whose linearization is representable in double precision.
  const auto lin = linearize_pair(200, 150);
  double sum_sq = 0.0;
  for (const auto& [m, c] : lin) {
    REQUIRE(std::isfinite(c));
    sum_sq += c * c;
  }
  // ||h_a h_b||_2^2 = sum of squared linearization coefficients is finite and >= 1.
  CHECK(sum_sq >= 1.0);
}

TEST_CASE("multiply agrees with pointwise products") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  for (std::size_t d = 1; d <= 2; ++d) {
    const auto a = random_expansion(d, 5, rng);
    const auto b = random_expansion(d, 4, rng);
    const auto ab = multiply(a, b);
    CHECK(ab.degree() == 9);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> x(d);
      for (auto& v : x) v = normal(rng);
      const double expected = expansion_eval(a, x) * expansion_eval(b, x);
      CHECK(std::fabs(expansion_eval(ab, x) - expected) <= 1e-9 * (1.0 + std::fabs(expected)));
    }
  }
}

TEST_CASE("affine_square is (1+p)^2/4 pointwise and doubles the degree") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> normal;
  for (std::size_t d = 1; d <= 2; ++d) {
    for (std::uint32_t deg : {1u, 4u, 10u}) {
      const auto p = random_expansion(d, deg, rng);
      const auto q = affine_square(p);
      CHECK(q.degree() == 2 * p.degree());
      const auto form = EvalForm::squared_affine(p);
      for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> x(d);
        for (auto& v : x) v = normal(rng);
        const double pv = expansion_eval(p, x);
        const double expected = 0.25 * (1.0 + pv) * (1.0 + pv);
        CHECK(std::fabs(expansion_eval(q, x) - expected) <= 1e-9 * (1.0 + std::fabs(expected)));
        CHECK(expansion_eval(form, x) == doctest::Approx(expected).epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("projected forms evaluate the 1-D polynomial at <direction, x>") {
  const auto p = HermiteExpansion::from_dense_1d(std::vector<double>{0.1, -0.4, 0.3});
  EvalForm form = EvalForm::squared_affine(p);
  form.direction = std::vector<double>{0.6, 0.8};
  CHECK(form.ambient_dim() == 2);
  const std::vector<double> x{1.0, -2.0};
  const double u = 0.6 - 1.6;
  const double pv = expansion_eval(p, std::vector<double>{u});
  CHECK(expansion_eval(form, x) == doctest::Approx(0.25 * (1 + pv) * (1 + pv)));
}
