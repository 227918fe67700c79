#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "nnapprox/sampling.hpp"

namespace nnapprox {

/// {x : <w, x> <= theta} with |w| = 1.
struct Halfspace {
  std::vector<double> w;
  double theta = 0.0;
};

/// Intersection of halfspaces; the empty list is the whole space.
struct Intersection {
  std::vector<Halfspace> halfspaces;
};

struct Ball {
  std::vector<double> center;
  double radius = 1.0;
};

/// Closed interval; endpoints may be infinite.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
};

/// Union of disjoint sorted closed intervals in R.
struct IntervalUnion {
  std::vector<Interval> intervals;
};

struct FullSpace {};
struct EmptySet {};

/// Membership-oracle-only set (no signed distance, no exact path).
struct OracleSet {
  std::function<bool(std::span<const double>)> contains;
  std::string label = "oracle";
};

/// A measurable H in R^d under the standard Gaussian measure.
class ConceptSet {
 public:
  using Kind = std::variant<Halfspace, Intersection, Ball, IntervalUnion, FullSpace, EmptySet, OracleSet>;

  /// Normalizes w; rejects w = 0.
  static ConceptSet halfspace(std::vector<double> w, double theta);
  static ConceptSet intersection(std::size_t dim, std::vector<Halfspace> halfspaces);
  static ConceptSet ball(std::vector<double> center, double radius);
  /// Sorts the intervals; rejects overlapping or inverted ones.
  static ConceptSet interval_union(std::vector<Interval> intervals);
  static ConceptSet full(std::size_t dim);
  static ConceptSet empty(std::size_t dim);
  static ConceptSet oracle(std::size_t dim, std::function<bool(std::span<const double>)> contains,
                           std::string label = "oracle");

  std::size_t dim() const { return dim_; }
  const Kind& kind() const { return kind_; }
  std::string kind_name() const;

  bool membership(std::span<const double> x) const;
  int signed_f(std::span<const double> x) const { return membership(x) ? 1 : -1; }

  bool has_signed_distance() const;
  /// Positive inside, negative outside; |value| is the distance to the
  /// boundary (exact except near edges of intersections).
  double signed_distance(std::span<const double> x) const;
  /// Copy of this set with the signed-distance capability switched off.
  ConceptSet without_signed_distance() const;

 private:
  ConceptSet(std::size_t dim, Kind kind) : dim_(dim), kind_(std::move(kind)) {}

  std::size_t dim_;
  Kind kind_;
  bool distance_enabled_ = true;
};

enum class GsaMethod { closed_form, thickening, class_bound, user_value };

std::string to_string(GsaMethod m);

/// Gaussian surface area value. std_error is nonzero only for thickening.
struct GsaEstimate {
  double value = 0.0;
  double std_error = 0.0;
  GsaMethod method = GsaMethod::closed_form;
  std::string source;  // human-readable provenance, e.g. "class_bound:intersection(m=4)"
};

enum class GsaMode { automatic, closed_form, thickening };

struct ThickeningOptions {
  std::vector<double> deltas{0.1, 0.05, 0.025};
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 0;
  Execution exec = Execution::parallel;
};

/// Closed form for halfspaces, origin-centred balls and the trivial sets;
/// otherwise the boundary-thickening estimator.
GsaEstimate gsa(const ConceptSet& s, GsaMode mode = GsaMode::automatic, const ThickeningOptions& opts = {});

std::optional<GsaEstimate> gsa_closed_form(const ConceptSet& s);

/// Gaussian measure of the band |dist(x, boundary)| <= delta, divided by
/// 2 delta, for each delta; extrapolated linearly to delta -> 0.
GsaEstimate gsa_thickening(const ConceptSet& s, const ThickeningOptions& opts);

struct IntersectionClass {
  double m;
};
struct ConvexClass {
  std::uint64_t d;
};

/// Order-of-magnitude class bounds with unit constant: max(sqrt(log m),
/// 1/sqrt(2 pi)) for intersections of m halfspaces, d^{1/4} for convex sets.
double gsa_class_bound(std::variant<IntersectionClass, ConvexClass> cls);

/// Standard normal density and CDF.
double normal_pdf(double x);
double normal_cdf(double x);

}  // namespace nnapprox
