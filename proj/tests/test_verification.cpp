#include <doctest.h>

#include <cmath>

#include "nnapprox/construction.hpp"
#include "nnapprox/errors.hpp"
#include "nnapprox/verification.hpp"
#include "oracles.hpp"

using namespace nnapprox;

TEST_CASE("verdicts are three-state on the confidence interval") {
  const ErrorEstimate e{0.10, 0.01, 10'000};
  CHECK(e.z() == doctest::Approx(1.959964).epsilon(1e-6));
  CHECK(BoundCheck::make("a", e, 0.2).verdict == Verdict::holds);
  CHECK(BoundCheck::make("b", e, 0.11).verdict == Verdict::holds_within_ci);
  CHECK(BoundCheck::make("c", e, 0.05).verdict == Verdict::violated);
  CHECK(BoundCheck::make("d", 0.3, 0.3).verdict == Verdict::holds);
  CHECK(BoundCheck::make("e", 0.3000001, 0.3).verdict == Verdict::violated);
}

TEST_CASE("zero polynomial has L1 error equal to the measure of the set") {
  for (double theta : {-1.0, 0.0, 1.0}) {
    const auto s = ConceptSet::halfspace({1.0}, theta);
    const auto err = l1_error(HermiteExpansion(1), s, 400'000, 3);
    CHECK(std::fabs(err.mean - oracle::normal_cdf(theta)) <= 3.0 * err.std_error);
  }
}

TEST_CASE("l1_error refuses small samples and mismatched dimensions") {
  const auto s = ConceptSet::halfspace({1.0, 0.0}, 0.0);
  CHECK_THROWS_AS(l1_error(HermiteExpansion(2), s, 999, 0), InvalidArgument);
  CHECK_THROWS_AS(l1_error(HermiteExpansion(3), s, 1000, 0), DimensionMismatch);
}

TEST_CASE("serial and parallel L1 estimates are identical") {
  const auto s = ConceptSet::ball({0.0, 0.0}, 1.0);
  const auto p = HermiteExpansion::constant(2, 0.4);
  const auto a = l1_error(p, s, 50'000, 8, Execution::serial);
  const auto b = l1_error(p, s, 50'000, 8, Execution::parallel);
  CHECK(a.mean == b.mean);
  CHECK(a.std_error == b.std_error);
}

TEST_CASE("certified reference degree") {
  CHECK(certified_reference_degree(0.5) == 200);
  const auto t = certified_reference_degree(0.99);
  CHECK(std::pow(0.99, t + 1.0) <= 1e-8);
  CHECK(std::pow(0.99, static_cast<double>(t)) > 1e-8);
  CHECK_THROWS_AS(certified_reference_degree(1.0), InvalidArgument);
}

TEST_CASE("truncation bound never fails on exact coefficients") {
  for (double theta : {-1.0, 0.0, 1.0}) {
    const auto c = exact_coeffs_halfspace_1d(theta, 2000);
    for (double rho : {0.0, 0.5, 0.9, 0.99, 1.0}) {
      for (std::uint64_t t : {0ull, 5ull, 20ull, 100ull}) {
        const auto check = check_truncation_bound(c, rho, t);
        CHECK(check.verdict != Verdict::violated);
      }
    }
  }
}

TEST_CASE("smoothing bound across the lemma grid") {
  for (double theta : {-1.0, 0.0, 1.0}) {
    const auto s = ConceptSet::halfspace({1.0}, theta);
    const double gamma = oracle::normal_pdf(theta);
    for (double rho : {0.0, 0.5, 0.9, 0.99, 1.0}) {
      const std::uint64_t t_ref = rho < 1.0 ? certified_reference_degree(rho) : 200;
      const auto check = check_smoothing_bound(s, gamma, rho, t_ref, 100'000, 13);
      CHECK_MESSAGE(check.verdict != Verdict::violated, "theta=", theta, " rho=", rho);
    }
  }
  // Without an exact profile the lemma cannot be evaluated.
  CHECK_THROWS_AS(check_smoothing_bound(ConceptSet::ball({0.0, 0.0}, 1.0), 0.6, 0.5, 200, 10'000, 0), Unsupported);
  // A reference tail that is not certified is refused.
  CHECK_THROWS(check_smoothing_bound(ConceptSet::halfspace({1.0}, 0.0), 0.4, 0.99, 400, 10'000, 0));
}

TEST_CASE("proof chain holds for constructed instances at several degrees") {
  for (double theta : {-1.0, 0.0, 1.0}) {
    const auto s = ConceptSet::halfspace({1.0}, theta);
    auto params = choose_params(oracle::normal_pdf(theta), 0.3, CoefficientMethod::exact, 1, 0);
    for (std::uint64_t t : {0ull, 5ull, 20ull, 100ull}) {
      params.t = t;
      const auto checks = check_proof_chain(s, params, 50'000, 29);
      CHECK(checks.size() == 11);
      for (const auto& c : checks) {
        // The parameter and final comparisons only hold at the formula degree.
        if (c.name.rfind("parameters", 0) == 0 || c.name.rfind("final", 0) == 0 ||
            c.name.rfind("definition", 0) == 0) {
          continue;
        }
        CHECK_MESSAGE(c.verdict != Verdict::violated, c.name, " theta=", theta, " t=", t);
      }
    }
  }
}

TEST_CASE("nonnegativity check catches negative forms") {
  const auto negative = EvalForm::expansion(HermiteExpansion::from_dense_1d(std::vector<double>{0.0, 1.0}));
  const auto bad = check_nonnegativity(negative, 10'000, 1);
  CHECK(bad.verdict == Verdict::violated);
  CHECK(bad.lhs_value() > 0.0);
  const auto squared = EvalForm::squared_affine(HermiteExpansion::from_dense_1d(std::vector<double>{0.0, 5.0, -3.0}));
  CHECK(check_nonnegativity(squared, 10'000, 1).verdict == Verdict::holds);
}

TEST_CASE("tail grid reaches |x_i| = 8 on axes and diagonals") {
  const auto g1 = tail_grid(1);
  double max_abs = 0.0;
  for (double v : g1) max_abs = std::max(max_abs, std::fabs(v));
  CHECK(max_abs == 8.0);
  const auto g2 = tail_grid(2);
  bool has_diagonal = false;
  for (std::size_t i = 0; i < g2.size(); i += 2) {
    if (g2[i] == 8.0 && g2[i + 1] == -8.0) has_diagonal = true;
  }
  CHECK(has_diagonal);
}
