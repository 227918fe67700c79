#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nnapprox/concept_sets.hpp"
#include "nnapprox/errors.hpp"
#include "oracles.hpp"

using namespace nnapprox;

TEST_CASE("membership and signed distance of a halfspace") {
  // {3x + 4y <= 5} is stored as {0.6x + 0.8y <= 1}.
  const auto h = ConceptSet::halfspace({3.0, 4.0}, 5.0);
  CHECK(h.membership(std::vector<double>{0.0, 0.0}));
  CHECK_FALSE(h.membership(std::vector<double>{3.0, 4.0}));
  CHECK(h.signed_f(std::vector<double>{3.0, 4.0}) == -1);
  CHECK(h.signed_distance(std::vector<double>{0.0, 0.0}) == doctest::Approx(1.0));
  CHECK(h.signed_distance(std::vector<double>{0.6, 0.8}) == doctest::Approx(0.0));
  CHECK_THROWS_AS(ConceptSet::halfspace({0.0, 0.0}, 1.0), InvalidArgument);
}

TEST_CASE("balls, interval unions and trivial sets") {
  const auto b = ConceptSet::ball({0.0, 0.0}, 2.0);
  CHECK(b.membership(std::vector<double>{1.0, 1.0}));
  CHECK_FALSE(b.membership(std::vector<double>{2.0, 1.0}));
  CHECK(b.signed_distance(std::vector<double>{0.5, 0.0}) == doctest::Approx(1.5));

  const auto u = ConceptSet::interval_union({{2.0, 3.0}, {-1.0, 0.5}});
  CHECK(u.membership(std::vector<double>{0.0}));
  CHECK(u.membership(std::vector<double>{2.5}));
  CHECK_FALSE(u.membership(std::vector<double>{1.0}));
  CHECK(u.signed_distance(std::vector<double>{1.0}) == doctest::Approx(-0.5));
  CHECK_THROWS_AS(ConceptSet::interval_union({{0.0, 2.0}, {1.0, 3.0}}), InvalidArgument);
  CHECK_THROWS_AS(ConceptSet::interval_union({{2.0, 1.0}}), InvalidArgument);

  CHECK(ConceptSet::full(3).membership(std::vector<double>{9.0, 9.0, 9.0}));
  CHECK_FALSE(ConceptSet::empty(3).membership(std::vector<double>{0.0, 0.0, 0.0}));
}

TEST_CASE("intersection membership requires every halfspace") {
  const auto s = ConceptSet::intersection(2, {{{1.0, 0.0}, 1.0}, {{0.0, 1.0}, 1.0}});
  CHECK(s.membership(std::vector<double>{0.0, 0.0}));
  CHECK_FALSE(s.membership(std::vector<double>{2.0, 0.0}));
  CHECK_FALSE(s.membership(std::vector<double>{0.0, 2.0}));
  CHECK(s.signed_distance(std::vector<double>{0.0, 0.5}) == doctest::Approx(0.5));
}

TEST_CASE("closed-form GSA values") {
  const auto g0 = gsa_closed_form(ConceptSet::halfspace({1.0}, 0.0));
  REQUIRE(g0);
  CHECK(g0->value == doctest::Approx(0.398942).epsilon(1e-6));
  CHECK(g0->std_error == 0.0);
  CHECK(g0->method == GsaMethod::closed_form);
  CHECK(gsa_closed_form(ConceptSet::halfspace({1.0}, 3.0))->value == doctest::Approx(0.004432).epsilon(1e-3));
  CHECK(gsa_closed_form(ConceptSet::full(2))->value == 0.0);
  CHECK(gsa_closed_form(ConceptSet::empty(2))->value == 0.0);
  // Circle of radius r in R^2: boundary length 2 pi r times density exp(-r^2/2)/(2 pi).
  const double r = 1.3;
  CHECK(gsa_closed_form(ConceptSet::ball({0.0, 0.0}, r))->value == doctest::Approx(r * std::exp(-r * r / 2)));
  // Interval [-1, 1] in R: two boundary points.
  CHECK(gsa_closed_form(ConceptSet::ball({0.0}, 1.0))->value == doctest::Approx(2.0 * oracle::normal_pdf(1.0)));
  CHECK_FALSE(gsa_closed_form(ConceptSet::ball({1.0, 0.0}, 1.0)));
}

TEST_CASE("thickening estimates agree with closed forms") {
  ThickeningOptions opts;
  opts.samples = 400'000;
  opts.seed = 11;
  const auto iv = ConceptSet::interval_union({{0.0, 1.0}});
  const auto est = gsa_thickening(iv, opts);
  CHECK(est.method == GsaMethod::thickening);
  CHECK(est.std_error > 0.0);
  CHECK(est.value == doctest::Approx(oracle::normal_pdf(0.0) + oracle::normal_pdf(1.0)).epsilon(0.05));

  const auto ball = ConceptSet::ball({0.0, 0.0, 0.0}, 1.5);
  const auto b = gsa_thickening(ball, opts);
  CHECK(b.value == doctest::Approx(gsa_closed_form(ball)->value).epsilon(0.05));

  CHECK_THROWS_AS(gsa_thickening(iv.without_signed_distance(), opts), Unsupported);
  const auto oracle_set = ConceptSet::oracle(1, [](std::span<const double> x) { return x[0] < 0.0; });
  CHECK_FALSE(oracle_set.has_signed_distance());
  CHECK_THROWS_AS(gsa(oracle_set), Unsupported);
}

TEST_CASE("class bounds use unit constants") {
  CHECK(gsa_class_bound(IntersectionClass{8}) == doctest::Approx(std::sqrt(std::log(8.0))));
  CHECK(gsa_class_bound(IntersectionClass{1}) == doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)));
  CHECK(gsa_class_bound(ConvexClass{16}) == doctest::Approx(2.0));
}

TEST_CASE("normal helpers match the oracle") {
  for (double x : {-6.0, -1.0, 0.0, 0.3, 2.5}) {
    CHECK(normal_pdf(x) == doctest::Approx(oracle::normal_pdf(x)).epsilon(1e-14));
    CHECK(normal_cdf(x) == doctest::Approx(oracle::normal_cdf(x)).epsilon(1e-14));
  }
}
