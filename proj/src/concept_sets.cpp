#include "nnapprox/concept_sets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nnapprox/errors.hpp"

namespace nnapprox {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void check_dim(std::size_t expected, std::size_t got) {
  if (expected != got) throw DimensionMismatch(expected, got);
}

Halfspace normalized(Halfspace h) {
  double n2 = 0.0;
  for (double v : h.w) {
    if (!std::isfinite(v)) throw InvalidArgument("halfspace normal must be finite");
    n2 += v * v;
  }
  if (n2 == 0.0) throw InvalidArgument("halfspace normal must be nonzero");
  if (!std::isfinite(h.theta)) throw InvalidArgument("halfspace threshold must be finite");
  const double n = std::sqrt(n2);
  // Already-unit normals are kept bit-for-bit.
  if (std::abs(n - 1.0) > 1e-15) {
    for (double& v : h.w) v /= n;
    h.theta /= n;
  }
  return h;
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

ConceptSet ConceptSet::halfspace(std::vector<double> w, double theta) {
  if (w.empty()) throw InvalidArgument("halfspace dimension must be positive");
  const std::size_t d = w.size();
  return ConceptSet(d, normalized(Halfspace{std::move(w), theta}));
}

ConceptSet ConceptSet::intersection(std::size_t dim, std::vector<Halfspace> halfspaces) {
  if (dim == 0) throw InvalidArgument("set dimension must be positive");
  for (auto& h : halfspaces) {
    check_dim(dim, h.w.size());
    h = normalized(std::move(h));
  }
  return ConceptSet(dim, Intersection{std::move(halfspaces)});
}

ConceptSet ConceptSet::ball(std::vector<double> center, double radius) {
  if (center.empty()) throw InvalidArgument("ball dimension must be positive");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidArgument("ball radius must be positive");
  const std::size_t d = center.size();
  return ConceptSet(d, Ball{std::move(center), radius});
}

ConceptSet ConceptSet::interval_union(std::vector<Interval> intervals) {
  for (const auto& iv : intervals) {
    if (std::isnan(iv.lo) || std::isnan(iv.hi) || iv.lo > iv.hi) {
      throw InvalidArgument("interval endpoints must satisfy lo <= hi");
    }
  }
  std::sort(intervals.begin(), intervals.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  for (std::size_t i = 1; i < intervals.size(); ++i) {
    if (!(intervals[i].lo > intervals[i - 1].hi)) throw InvalidArgument("intervals must be disjoint");
  }
  return ConceptSet(1, IntervalUnion{std::move(intervals)});
}

ConceptSet ConceptSet::full(std::size_t dim) {
  if (dim == 0) throw InvalidArgument("set dimension must be positive");
  return ConceptSet(dim, FullSpace{});
}

ConceptSet ConceptSet::empty(std::size_t dim) {
  if (dim == 0) throw InvalidArgument("set dimension must be positive");
  return ConceptSet(dim, EmptySet{});
}

ConceptSet ConceptSet::oracle(std::size_t dim, std::function<bool(std::span<const double>)> contains,
                              std::string label) {
  if (dim == 0) throw InvalidArgument("set dimension must be positive");
  if (!contains) throw InvalidArgument("oracle set needs a membership function");
  return ConceptSet(dim, OracleSet{std::move(contains), std::move(label)});
}

std::string ConceptSet::kind_name() const {
  return std::visit(overloaded{
                        [](const Halfspace&) { return std::string("halfspace"); },
                        [](const Intersection&) { return std::string("intersection"); },
                        [](const Ball&) { return std::string("ball"); },
                        [](const IntervalUnion&) { return std::string("interval_union"); },
                        [](const FullSpace&) { return std::string("full"); },
                        [](const EmptySet&) { return std::string("empty"); },
                        [](const OracleSet& o) { return o.label; },
                    },
                    kind_);
}

bool ConceptSet::membership(std::span<const double> x) const {
  check_dim(dim_, x.size());
  return std::visit(overloaded{
                        [&](const Halfspace& h) { return dot(h.w, x) <= h.theta; },
                        [&](const Intersection& in) {
                          for (const auto& h : in.halfspaces) {
                            if (!(dot(h.w, x) <= h.theta)) return false;
                          }
                          return true;
                        },
                        [&](const Ball& b) {
                          double r2 = 0.0;
                          for (std::size_t i = 0; i < x.size(); ++i) r2 += (x[i] - b.center[i]) * (x[i] - b.center[i]);
                          return r2 <= b.radius * b.radius;
                        },
                        [&](const IntervalUnion& u) {
                          for (const auto& iv : u.intervals) {
                            if (iv.lo <= x[0] && x[0] <= iv.hi) return true;
                          }
                          return false;
                        },
                        [](const FullSpace&) { return true; },
                        [](const EmptySet&) { return false; },
                        [&](const OracleSet& o) { return o.contains(x); },
                    },
                    kind_);
}

bool ConceptSet::has_signed_distance() const {
  return distance_enabled_ && !std::holds_alternative<OracleSet>(kind_);
}

ConceptSet ConceptSet::without_signed_distance() const {
  ConceptSet copy = *this;
  copy.distance_enabled_ = false;
  return copy;
}

double ConceptSet::signed_distance(std::span<const double> x) const {
  if (!has_signed_distance()) throw Unsupported("set '" + kind_name() + "' has no signed distance");
  check_dim(dim_, x.size());
  return std::visit(overloaded{
                        [&](const Halfspace& h) { return h.theta - dot(h.w, x); },
                        [&](const Intersection& in) {
                          double d = kInf;
                          for (const auto& h : in.halfspaces) d = std::min(d, h.theta - dot(h.w, x));
                          return d;
                        },
                        [&](const Ball& b) {
                          double r2 = 0.0;
                          for (std::size_t i = 0; i < x.size(); ++i) r2 += (x[i] - b.center[i]) * (x[i] - b.center[i]);
                          return b.radius - std::sqrt(r2);
                        },
                        [&](const IntervalUnion& u) {
                          const double v = x[0];
                          double outside = kInf;
                          for (const auto& iv : u.intervals) {
                            if (iv.lo <= v && v <= iv.hi) return std::min(v - iv.lo, iv.hi - v);
                            outside = std::min(outside, v < iv.lo ? iv.lo - v : v - iv.hi);
                          }
                          return -outside;
                        },
                        [](const FullSpace&) { return kInf; },
                        [](const EmptySet&) { return -kInf; },
                        [](const OracleSet&) { return 0.0; },
                    },
                    kind_);
}

std::string to_string(GsaMethod m) {
  switch (m) {
    case GsaMethod::closed_form: return "closed_form";
    case GsaMethod::thickening: return "thickening";
    case GsaMethod::class_bound: return "class_bound";
    case GsaMethod::user_value: return "user_value";
  }
  return "unknown";
}

std::optional<GsaEstimate> gsa_closed_form(const ConceptSet& s) {
  const auto& kind = s.kind();
  if (const auto* h = std::get_if<Halfspace>(&kind)) {
    return GsaEstimate{normal_pdf(h->theta), 0.0, GsaMethod::closed_form, "closed_form"};
  }
  if (const auto* b = std::get_if<Ball>(&kind)) {
    if (std::any_of(b->center.begin(), b->center.end(), [](double c) { return c != 0.0; })) return std::nullopt;
    const double d = static_cast<double>(s.dim());
    const double r = b->radius;
    // r^{d-1} e^{-r^2/2} * surface area of S^{d-1} / (2 pi)^{d/2}
    const double log_value = (d - 1.0) * std::log(r) - 0.5 * r * r + std::log(2.0) + 0.5 * d * std::log(std::numbers::pi) -
                             std::lgamma(0.5 * d) - 0.5 * d * std::log(2.0 * std::numbers::pi);
    return GsaEstimate{std::exp(log_value), 0.0, GsaMethod::closed_form, "closed_form"};
  }
  if (std::holds_alternative<FullSpace>(kind) || std::holds_alternative<EmptySet>(kind)) {
    return GsaEstimate{0.0, 0.0, GsaMethod::closed_form, "closed_form"};
  }
  if (const auto* in = std::get_if<Intersection>(&kind); in && in->halfspaces.empty()) {
    return GsaEstimate{0.0, 0.0, GsaMethod::closed_form, "closed_form"};
  }
  return std::nullopt;
}

GsaEstimate gsa_thickening(const ConceptSet& s, const ThickeningOptions& opts) {
  if (!s.has_signed_distance()) {
    throw Unsupported("thickening estimator needs a signed distance; set '" + s.kind_name() + "' has none");
  }
  if (opts.samples == 0) throw InvalidArgument("thickening sample budget must be positive");
  if (opts.deltas.empty()) throw InvalidArgument("thickening needs at least one delta");
  for (double delta : opts.deltas) {
    if (!(delta > 0.0) || !std::isfinite(delta)) throw InvalidArgument("thickening deltas must be positive");
  }

  const std::size_t k = opts.deltas.size();
  std::vector<double> est(k), se(k);
  for (std::size_t j = 0; j < k; ++j) {
    const double delta = opts.deltas[j];
    SamplingPlan plan{opts.samples, derive_seed(opts.seed, j)};
    auto factory = [&s, delta]() -> Integrand {
      return [&s, delta](std::span<const double> x, std::span<double> out) {
        out[0] = std::abs(s.signed_distance(x)) <= delta ? 1.0 : 0.0;
      };
    };
    Moments m = gaussian_moments(plan, s.dim(), 1, factory, opts.exec);
    est[j] = m.mean[0] / (2.0 * delta);
    se[j] = m.std_error(0) / (2.0 * delta);
  }

  // Least-squares line through (delta_j, est_j); the intercept is a fixed
  // linear combination sum a_j est_j, so its standard error follows directly.
  std::vector<double> a(k, 1.0 / static_cast<double>(k));
  if (k > 1) {
    double mean_delta = 0.0;
    for (double delta : opts.deltas) mean_delta += delta;
    mean_delta /= static_cast<double>(k);
    double sxx = 0.0;
    for (double delta : opts.deltas) sxx += (delta - mean_delta) * (delta - mean_delta);
    if (sxx > 0.0) {
      for (std::size_t j = 0; j < k; ++j) a[j] -= mean_delta * (opts.deltas[j] - mean_delta) / sxx;
    }
  }
  double value = 0.0, var = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    value += a[j] * est[j];
    var += a[j] * a[j] * se[j] * se[j];
  }
  return GsaEstimate{std::max(0.0, value), std::sqrt(var), GsaMethod::thickening, "thickening"};
}

GsaEstimate gsa(const ConceptSet& s, GsaMode mode, const ThickeningOptions& opts) {
  if (mode != GsaMode::thickening) {
    if (auto closed = gsa_closed_form(s)) return *closed;
    if (mode == GsaMode::closed_form) {
      throw Unsupported("no closed-form Gaussian surface area for set '" + s.kind_name() + "'");
    }
  }
  return gsa_thickening(s, opts);
}

double gsa_class_bound(std::variant<IntersectionClass, ConvexClass> cls) {
  return std::visit(overloaded{
                        [](IntersectionClass c) {
                          if (!(c.m >= 1.0)) throw InvalidArgument("intersection class needs m >= 1");
                          const double floor = 1.0 / std::sqrt(2.0 * std::numbers::pi);
                          return std::max(std::sqrt(std::log(c.m)), floor);
                        },
                        [](ConvexClass c) {
                          if (c.d < 1) throw InvalidArgument("convex class needs d >= 1");
                          return std::pow(static_cast<double>(c.d), 0.25);
                        },
                    },
                    cls);
}

}  // namespace nnapprox
