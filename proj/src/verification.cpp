#include "nnapprox/verification.hpp"

#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <memory>
#include <numbers>

#include "nnapprox/errors.hpp"

namespace nnapprox {
namespace {

ErrorEstimate estimate_from(const Moments& m, std::size_t i) {
  return ErrorEstimate{m.mean[i], m.std_error(i), m.count, kDefaultConfidence};
}

void check_samples(std::uint64_t n) {
  if (n < kMinConfidenceSamples) {
    throw InvalidArgument("confidence reporting needs at least " + std::to_string(kMinConfidenceSamples) +
                          " samples");
  }
}

bool in_intervals(const std::vector<Interval>& intervals, double u) {
  for (const auto& iv : intervals) {
    if (iv.lo <= u && u <= iv.hi) return true;
  }
  return false;
}

ExactProfile require_profile(const ConceptSet& s) {
  auto profile = exact_profile(s);
  if (!profile) {
    throw Unsupported("lemma checks need an exact coefficient path (1-D interval unions, halfspaces, trivial sets); '" +
                      s.kind_name() + "' has none");
  }
  return *profile;
}

// T_rho f on the exact path: f itself at rho = 1, its mean at rho = 0, the
// degree-T expansion otherwise (error <= rho^{T+1} in L2).
struct SmoothedReference {
  double rho;
  std::uint64_t degree;
  HermiteExpansion f_coeffs{1};
  HermiteExpansion g_coeffs{1};
  double tail = 0.0;
};

SmoothedReference smoothed_reference(const ExactProfile& profile, double rho, std::uint64_t t_ref) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw InvalidArgument("rho must lie in [0, 1]");
  SmoothedReference ref{rho, t_ref};
  if (rho > 0.0 && rho < 1.0) {
    ref.tail = std::pow(rho, static_cast<double>(t_ref + 1));
    if (ref.tail > kReferenceTailTolerance) {
      throw InvalidArgument("reference degree " + std::to_string(t_ref) + " leaves tail rho^{T+1} = " +
                            std::to_string(ref.tail) + " above " + std::to_string(kReferenceTailTolerance) +
                            "; need T >= " + std::to_string(certified_reference_degree(rho)));
    }
  }
  ref.f_coeffs = exact_coeffs_intervals(profile.intervals, t_ref);
  ref.g_coeffs = rho == 1.0 ? ref.f_coeffs : ou_apply(ref.f_coeffs, rho);
  return ref;
}

}  // namespace

double ErrorEstimate::z() const {
  boost::math::normal_distribution<double> standard;
  return boost::math::quantile(standard, 1.0 - 0.5 * (1.0 - confidence_level));
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::holds_within_ci: return "holds_within_ci";
    case Verdict::violated: return "violated";
  }
  return "unknown";
}

BoundCheck BoundCheck::make(std::string name, std::variant<ErrorEstimate, double> lhs, double rhs, std::string note) {
  BoundCheck b{std::move(name), lhs, rhs, Verdict::holds, std::move(note)};
  if (const auto* e = std::get_if<ErrorEstimate>(&lhs)) {
    if (e->upper() <= rhs) b.verdict = Verdict::holds;
    else if (e->lower() > rhs) b.verdict = Verdict::violated;
    else b.verdict = Verdict::holds_within_ci;
  } else {
    b.verdict = std::get<double>(lhs) <= rhs ? Verdict::holds : Verdict::violated;
  }
  return b;
}

double BoundCheck::lhs_value() const {
  if (const auto* e = std::get_if<ErrorEstimate>(&lhs)) return e->mean;
  return std::get<double>(lhs);
}

ErrorEstimate l1_error(const EvalForm& approx, const ConceptSet& s, std::uint64_t n, std::uint64_t seed,
                       Execution exec) {
  check_samples(n);
  if (approx.ambient_dim() != s.dim()) throw DimensionMismatch(s.dim(), approx.ambient_dim());
  auto evaluator = std::make_shared<const FormEvaluator>(approx);
  auto factory = [&s, evaluator]() -> Integrand {
    auto scratch = std::make_shared<std::vector<double>>(evaluator->scratch_size());
    return [&s, evaluator, scratch](std::span<const double> x, std::span<double> out) {
      const double h = s.membership(x) ? 1.0 : 0.0;
      out[0] = std::abs((*evaluator)(x, *scratch) - h);
    };
  };
  return estimate_from(gaussian_moments(SamplingPlan{n, seed}, s.dim(), 1, factory, exec), 0);
}

ErrorEstimate l1_error(const HermiteExpansion& approx, const ConceptSet& s, std::uint64_t n, std::uint64_t seed,
                       Execution exec) {
  return l1_error(EvalForm::expansion(approx), s, n, seed, exec);
}

std::uint64_t certified_reference_degree(double rho, double tol) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw InvalidArgument("rho must lie in [0, 1]");
  if (rho == 1.0) throw InvalidArgument("rho = 1 has no finite certified reference degree");
  if (rho == 0.0) return 200;
  auto t = static_cast<std::uint64_t>(std::max(0.0, std::ceil(std::log(tol) / std::log(rho)) - 1.0));
  while (std::pow(rho, static_cast<double>(t + 1)) > tol) ++t;
  return std::max<std::uint64_t>(t, 200);
}

BoundCheck check_smoothing_bound(const ConceptSet& s, double gamma, double rho, std::uint64_t t_ref, std::uint64_t n,
                                 std::uint64_t seed, Execution exec) {
  check_samples(n);
  if (t_ref < 200) throw InvalidArgument("smoothing check needs a reference degree of at least 200");
  const ExactProfile profile = require_profile(s);
  const auto ref = std::make_shared<const SmoothedReference>(smoothed_reference(profile, rho, t_ref));
  const auto intervals = std::make_shared<const std::vector<Interval>>(profile.intervals);

  // <w, x> is standard normal for unit w, so the check samples u directly.
  auto factory = [ref, intervals]() -> Integrand {
    auto g = std::make_shared<ExpansionEvaluator>(ref->g_coeffs);
    return [ref, intervals, g](std::span<const double> u, std::span<double> out) {
      const double f = in_intervals(*intervals, u[0]) ? 1.0 : -1.0;
      const double gu = ref->rho == 1.0 ? f : (*g)(u, {});
      out[0] = std::abs(f - gu);
    };
  };
  ErrorEstimate lhs = estimate_from(gaussian_moments(SamplingPlan{n, seed}, 1, 1, factory, exec), 0);
  lhs.mean += ref->tail;
  const double rhs = 2.0 * std::sqrt(std::numbers::pi) * gamma * std::sqrt(1.0 - rho);
  return BoundCheck::make("smoothing: ||f - T_rho f||_1 <= 2 sqrt(pi) Gamma sqrt(1-rho)", lhs, rhs,
                          "reference degree " + std::to_string(t_ref) + ", tail slack " + std::to_string(ref->tail) +
                              " added to lhs");
}

BoundCheck check_truncation_bound(const HermiteExpansion& coeffs_f, double rho, std::uint64_t t) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw InvalidArgument("rho must lie in [0, 1]");
  const std::uint64_t t_ref = coeffs_f.degree();
  if (!(t < t_ref)) throw InvalidArgument("truncation check needs t below the reference degree");
  double tail = 0.0, mass = 0.0;
  for (const auto& [alpha, c] : coeffs_f.terms()) {
    const auto k = alpha.total_degree();
    mass += c * c;
    if (k > t) tail += std::pow(rho, 2.0 * static_cast<double>(k)) * c * c;
  }
  // ||f||_2 = 1, so the coefficients beyond t_ref carry 1 - mass in total.
  const double slack = std::pow(rho, 2.0 * static_cast<double>(t_ref + 1)) * std::max(0.0, 1.0 - mass);
  const double lhs = std::sqrt(tail + slack);
  const double rhs = std::pow(rho, static_cast<double>(t + 1));
  return BoundCheck::make("truncation: ||g - p||_2 <= rho^(t+1)", lhs, rhs,
                          "exact coefficients to degree " + std::to_string(t_ref));
}

std::vector<BoundCheck> check_proof_chain(const ConceptSet& s, const ConstructionParams& params, std::uint64_t n,
                                          std::uint64_t seed, std::optional<std::uint64_t> t_ref, Execution exec) {
  check_samples(n);
  const ExactProfile profile = require_profile(s);
  const double rho = params.rho;
  const std::uint64_t t = params.t;
  std::uint64_t degree = t_ref.value_or(rho == 1.0 ? t + 1 : certified_reference_degree(rho));
  degree = std::max(degree, t + 1);

  const auto ref = std::make_shared<const SmoothedReference>(smoothed_reference(profile, rho, degree));
  const HermiteExpansion p = truncate(ref->g_coeffs, t);
  const auto intervals = std::make_shared<const std::vector<Interval>>(profile.intervals);
  const auto p_shared = std::make_shared<const HermiteExpansion>(p);

  enum Out { kQH, kQG, kFG, kProd, kG2, kTarget, kDecomp, kTerm2, kCombined, kCount };
  auto factory = [ref, intervals, p_shared]() -> Integrand {
    auto g_eval = std::make_shared<ExpansionEvaluator>(ref->g_coeffs);
    auto p_eval = std::make_shared<ExpansionEvaluator>(*p_shared);
    return [ref, intervals, g_eval, p_eval](std::span<const double> u, std::span<double> out) {
      const bool member = in_intervals(*intervals, u[0]);
      const double h = member ? 1.0 : 0.0;
      const double f = member ? 1.0 : -1.0;
      const double g = ref->rho == 1.0 ? f : (*g_eval)(u, {});
      const double pv = (*p_eval)(u, {});
      const double q = 0.25 * (1.0 + pv) * (1.0 + pv);
      out[kQH] = std::abs(q - h);
      out[kQG] = std::abs(q - 0.5 * (g + 1.0));
      out[kFG] = std::abs(f - g);
      out[kProd] = std::abs((pv - g) * (pv + g + 2.0));
      out[kG2] = std::abs(g * g - 1.0);
      out[kTarget] = out[kQH] - out[kQG] - 0.5 * out[kFG];
      out[kDecomp] = out[kQG] - 0.25 * out[kProd] - 0.25 * out[kG2];
      out[kTerm2] = out[kG2] - 2.0 * out[kFG];
      out[kCombined] = out[kQH] - out[kFG];
    };
  };
  const Moments m = gaussian_moments(SamplingPlan{n, seed}, 1, kCount, factory, exec);
  auto est = [&](std::size_t i, double shift = 0.0) {
    ErrorEstimate e = estimate_from(m, i);
    e.mean += shift;
    return e;
  };

  const double tail = ref->tail;
  const double smoothing = 2.0 * std::sqrt(std::numbers::pi) * params.gamma * std::sqrt(1.0 - rho);
  const double truncation = std::pow(rho, static_cast<double>(t + 1));
  const double p_minus_g = l2_norm(p - ref->g_coeffs);
  const double sum_norm = l2_norm(p + ref->g_coeffs + HermiteExpansion::constant(1, 2.0)) + tail;
  const std::string ref_note = "g from exact expansion to degree " + std::to_string(degree);

  std::vector<BoundCheck> checks;
  checks.push_back(BoundCheck::make("target: ||q-h||_1 - ||q-(g+1)/2||_1 - 0.5||f-g||_1 <= 0", est(kTarget), 0.0,
                                    "paired estimate of a pointwise triangle inequality"));
  checks.push_back(BoundCheck::make("decomposition: ||q-(g+1)/2||_1 - 0.25||(p-g)(p+g+2)||_1 - 0.25||g^2-1||_1 <= 0",
                                    est(kDecomp), 1e-12, "rhs allows floating-point rounding"));
  checks.push_back(BoundCheck::make("term1: ||p+g+2||_2 <= 4", sum_norm, 4.0, "exact coefficients, tail added"));
  checks.push_back(BoundCheck::make("term2: ||g^2-1||_1 - 2||f-g||_1 <= 0", est(kTerm2), 4.0 * tail,
                                    "rhs allows the reference tail"));
  checks.push_back(BoundCheck::make("holder: 0.25||(p-g)(p+g+2)||_1 <= ||p-g||_2",
                                    ErrorEstimate{0.25 * m.mean[kProd], 0.25 * m.std_error(kProd), m.count}, p_minus_g,
                                    ref_note));
  checks.push_back(BoundCheck::make("combined: ||q-h||_1 - ||f-g||_1 <= ||p-g||_2", est(kCombined), p_minus_g + tail,
                                    ref_note));
  checks.push_back(BoundCheck::make("smoothing: ||f - T_rho f||_1 <= 2 sqrt(pi) Gamma sqrt(1-rho)", est(kFG, tail),
                                    smoothing, ref_note));
  checks.push_back(check_truncation_bound(ref->f_coeffs, rho, t));
  checks.push_back(BoundCheck::make("final: ||q-h||_1 <= rho^(t+1) + 2 sqrt(pi) Gamma sqrt(1-rho)", est(kQH),
                                    truncation + smoothing));
  checks.push_back(BoundCheck::make("parameters: rho^(t+1) + 2 sqrt(pi) Gamma sqrt(1-rho) <= epsilon",
                                    truncation + smoothing, params.epsilon));
  checks.push_back(BoundCheck::make("definition: ||q-h||_1 <= epsilon", est(kQH), params.epsilon));
  return checks;
}

std::vector<double> tail_grid(std::size_t dim) {
  std::vector<std::vector<double>> dirs;
  for (std::size_t i = 0; i < dim; ++i) {
    for (double sign : {1.0, -1.0}) {
      std::vector<double> v(dim, 0.0);
      v[i] = sign;
      dirs.push_back(std::move(v));
    }
  }
  if (dim > 1 && dim <= 10) {
    for (std::size_t mask = 0; mask < (std::size_t{1} << dim); ++mask) {
      std::vector<double> v(dim);
      for (std::size_t i = 0; i < dim; ++i) v[i] = (mask >> i) & 1 ? -1.0 : 1.0;
      dirs.push_back(std::move(v));
    }
  }
  constexpr int kSteps = 256;  // radius step 1/32 out to 8
  std::vector<double> grid;
  grid.reserve(dirs.size() * kSteps * dim + dim);
  grid.insert(grid.end(), dim, 0.0);
  for (const auto& v : dirs) {
    for (int k = 1; k <= kSteps; ++k) {
      const double r = 8.0 * k / kSteps;
      for (double c : v) grid.push_back(r * c);
    }
  }
  return grid;
}

BoundCheck check_nonnegativity(const EvalForm& form, std::uint64_t n, std::uint64_t seed, Execution exec) {
  const auto evaluator = std::make_shared<const FormEvaluator>(form);
  const std::size_t d = form.ambient_dim();
  auto factory = [evaluator]() -> Integrand {
    auto scratch = std::make_shared<std::vector<double>>(evaluator->scratch_size());
    return [evaluator, scratch](std::span<const double> x, std::span<double> out) {
      out[0] = (*evaluator)(x, *scratch) < 0.0 ? 1.0 : 0.0;
    };
  };
  double negatives = 0.0;
  if (n > 0) {
    const Moments m = gaussian_moments(SamplingPlan{n, seed}, d, 1, factory, exec);
    negatives = std::round(m.mean[0] * static_cast<double>(m.count));
  }
  const std::vector<double> grid = tail_grid(d);
  std::vector<double> scratch(evaluator->scratch_size());
  double grid_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); i += d) {
    const double v = (*evaluator)(std::span<const double>(grid.data() + i, d), scratch);
    grid_min = std::min(grid_min, v);
    if (v < 0.0) negatives += 1.0;
  }
  const std::size_t points = n + grid.size() / d;
  return BoundCheck::make("nonnegativity: #{x : q(x) < 0} <= 0", negatives, 0.0,
                          std::to_string(points) + " points, tail-grid minimum " + std::to_string(grid_min));
}

BoundCheck check_nonnegativity(const NonNegApprox& approx, std::uint64_t n, std::uint64_t seed, Execution exec) {
  return check_nonnegativity(approx.q_form, n, seed, exec);
}

}  // namespace nnapprox
