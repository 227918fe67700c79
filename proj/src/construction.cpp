#include "nnapprox/construction.hpp"

#include <algorithm>
#include <memory>
#include <cmath>
#include <numbers>

#include "nnapprox/errors.hpp"
#include "nnapprox/quadrature.hpp"
#include "nnapprox/verification.hpp"

namespace nnapprox {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Relative tolerance applied before the ceiling in the degree formula.
constexpr double kCeilTolerance = 1e-12;
// Seed offset for the L1 stream of empirical degree searches.
constexpr std::uint64_t kL1Stream = 0x11;

// Flattened multi-index table for the sampling and quadrature loops.
struct IndexTable {
  std::size_t dim = 0;
  std::uint32_t max_degree = 0;
  std::vector<MultiIndex> indices;
  std::vector<std::uint32_t> flat;

  IndexTable(std::size_t d, std::uint32_t t) : dim(d), max_degree(t), indices(enumerate_multi_indices(d, t)) {
    flat.reserve(indices.size() * d);
    for (const auto& a : indices) flat.insert(flat.end(), a.exponents().begin(), a.exponents().end());
  }

  // out[i] = weight * h_{alpha_i}(x); table must hold dim*(max_degree+1) values.
  void basis(std::span<const double> x, double weight, std::span<double> table, std::span<double> out) const {
    const std::size_t stride = max_degree + 1;
    for (std::size_t i = 0; i < dim; ++i) hermite_table(x[i], table.subspan(i * stride, stride));
    const std::uint32_t* row = flat.data();
    for (std::size_t k = 0; k < indices.size(); ++k) {
      double prod = weight;
      for (std::size_t i = 0; i < dim; ++i) prod *= table[i * stride + row[i]];
      out[k] = prod;
      row += dim;
    }
  }
};

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) {
    throw InvalidArgument("epsilon must lie in the open interval (0, 1/2)");
  }
}

}  // namespace

std::string to_string(CoefficientMethod m) {
  switch (m) {
    case CoefficientMethod::exact: return "exact";
    case CoefficientMethod::quadrature: return "quadrature";
    case CoefficientMethod::monte_carlo: return "mc";
  }
  return "unknown";
}

CoefficientMethod parse_coefficient_method(const std::string& s) {
  if (s == "exact") return CoefficientMethod::exact;
  if (s == "quadrature") return CoefficientMethod::quadrature;
  if (s == "mc" || s == "monte_carlo") return CoefficientMethod::monte_carlo;
  throw InvalidArgument("unknown coefficient method '" + s + "' (expected exact|quadrature|mc)");
}

double ConstructionParams::effective_epsilon() const {
  return method == CoefficientMethod::monte_carlo ? epsilon * (1.0 - estimation_budget_fraction) : epsilon;
}

ConstructionParams choose_params(double gamma, double epsilon, CoefficientMethod method, std::uint64_t sample_budget,
                                 std::uint64_t seed, double estimation_budget_fraction) {
  check_epsilon(epsilon);
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw InvalidArgument("gamma must be a finite non-negative number");
  if (!(estimation_budget_fraction > 0.0 && estimation_budget_fraction < 1.0)) {
    throw InvalidArgument("estimation budget fraction must lie in (0, 1)");
  }
  if (sample_budget == 0) throw InvalidArgument("sample budget must be positive");

  ConstructionParams p;
  p.epsilon = epsilon;
  p.gamma = gamma;
  p.method = method;
  p.sample_budget = sample_budget;
  p.seed = seed;
  p.estimation_budget_fraction = estimation_budget_fraction;
  if (gamma == 0.0) return p;  // constant polynomial, zero error

  const double eps = p.effective_epsilon();
  const double ratio = eps * eps / (16.0 * std::numbers::pi * gamma * gamma);
  p.rho = 1.0 - std::min(1.0, ratio);
  if (p.rho == 0.0) return p;

  const double needed = std::log(2.0 / eps) / (1.0 - p.rho);
  const double t_plus_one = std::ceil(needed * (1.0 - kCeilTolerance));
  if (!(t_plus_one < 9.0e15)) throw BudgetExceeded("degree from the parameter formula is not representable");
  p.t = t_plus_one < 1.0 ? 0 : static_cast<std::uint64_t>(t_plus_one) - 1;
  return p;
}

std::optional<ExactProfile> exact_profile(const ConceptSet& s) {
  const std::size_t d = s.dim();
  auto constant = [d](std::vector<Interval> iv) {
    ExactProfile prof{std::move(iv), std::nullopt};
    if (d > 1) {
      std::vector<double> e1(d, 0.0);
      e1[0] = 1.0;
      prof.direction = std::move(e1);
    }
    return prof;
  };
  auto from_halfspace = [d](const Halfspace& h) -> ExactProfile {
    if (d == 1) {
      if (h.w[0] > 0) return {{Interval{-kInf, h.theta / h.w[0]}}, std::nullopt};
      return {{Interval{h.theta / h.w[0], kInf}}, std::nullopt};
    }
    return {{Interval{-kInf, h.theta}}, h.w};
  };

  const auto& kind = s.kind();
  if (const auto* h = std::get_if<Halfspace>(&kind)) return from_halfspace(*h);
  if (const auto* in = std::get_if<Intersection>(&kind)) {
    if (in->halfspaces.empty()) return constant({Interval{}});
    if (in->halfspaces.size() == 1) return from_halfspace(in->halfspaces.front());
    return std::nullopt;
  }
  if (const auto* b = std::get_if<Ball>(&kind); b && d == 1) {
    return ExactProfile{{Interval{b->center[0] - b->radius, b->center[0] + b->radius}}, std::nullopt};
  }
  if (const auto* u = std::get_if<IntervalUnion>(&kind)) return ExactProfile{u->intervals, std::nullopt};
  if (std::holds_alternative<FullSpace>(kind)) return constant({Interval{}});
  if (std::holds_alternative<EmptySet>(kind)) return constant({});
  return std::nullopt;
}

HermiteExpansion exact_coeffs_intervals(std::span<const Interval> intervals, std::uint64_t t) {
  std::vector<double> coeffs(t + 1, 0.0);
  double measure = 0.0;
  for (const auto& iv : intervals) measure += normal_cdf(iv.hi) - normal_cdf(iv.lo);
  coeffs[0] = 2.0 * measure - 1.0;
  if (t > 0) {
    // int_lo^hi h_n phi = (h_{n-1}(lo) phi(lo) - h_{n-1}(hi) phi(hi)) / sqrt(n)
    std::vector<double> table(t);
    for (const auto& iv : intervals) {
      for (int side = 0; side < 2; ++side) {
        const double x = side == 0 ? iv.lo : iv.hi;
        if (!std::isfinite(x)) continue;
        const double sign = side == 0 ? 1.0 : -1.0;
        const double phi = normal_pdf(x);
        hermite_table(x, table);
        for (std::uint64_t n = 1; n <= t; ++n) {
          coeffs[n] += sign * 2.0 * table[n - 1] * phi / std::sqrt(static_cast<double>(n));
        }
      }
    }
  }
  return HermiteExpansion::from_dense_1d(coeffs);
}

HermiteExpansion exact_coeffs_halfspace_1d(double theta, std::uint64_t t) {
  const Interval iv{-kInf, theta};
  return exact_coeffs_intervals(std::span<const Interval>(&iv, 1), t);
}

CoefficientEstimate estimate_coeffs(const ConceptSet& s, std::uint64_t t, std::uint64_t n, std::uint64_t seed,
                                    std::uint64_t coefficient_cap, Execution exec) {
  if (n == 0) throw InvalidArgument("coefficient estimation needs at least one sample");
  const std::uint64_t count = count_multi_indices(t, s.dim());
  if (count > coefficient_cap) {
    throw BudgetExceeded("coefficient count C(t+d, d) = " + std::to_string(count) + " exceeds the cap of " +
                         std::to_string(coefficient_cap));
  }
  const IndexTable index(s.dim(), static_cast<std::uint32_t>(t));
  auto factory = [&s, &index]() -> Integrand {
    auto table = std::make_shared<std::vector<double>>(index.dim * (index.max_degree + 1));
    return [&s, &index, table](std::span<const double> x, std::span<double> out) {
      index.basis(x, static_cast<double>(s.signed_f(x)), *table, out);
    };
  };
  const Moments m = gaussian_moments(SamplingPlan{n, seed}, s.dim(), index.indices.size(), factory, exec);

  CoefficientEstimate est{HermiteExpansion(s.dim()), {}, n};
  for (std::size_t k = 0; k < index.indices.size(); ++k) {
    est.coeffs.add(index.indices[k], m.mean[k]);
    est.std_errors.emplace(index.indices[k], m.std_error(k));
  }
  return est;
}

HermiteExpansion quadrature_coeffs(const ConceptSet& s, std::uint64_t t, std::size_t nodes_per_dim) {
  const std::size_t d = s.dim();
  if (d > 3 || t > 30) throw InvalidArgument("quadrature coefficients support d <= 3 and t <= 30");
  if (nodes_per_dim == 0) nodes_per_dim = std::clamp<std::size_t>(2 * (t + 1), 32, 64);
  const QuadratureRule rule = gauss_hermite(nodes_per_dim);
  const IndexTable index(d, static_cast<std::uint32_t>(t));

  std::vector<double> acc(index.indices.size(), 0.0), out(acc.size()), table(d * (t + 1)), x(d);
  std::vector<std::size_t> counter(d, 0);
  while (true) {
    double w = 1.0;
    for (std::size_t i = 0; i < d; ++i) {
      x[i] = rule.nodes[counter[i]];
      w *= rule.weights[counter[i]];
    }
    index.basis(x, w * s.signed_f(x), table, out);
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += out[k];
    std::size_t i = 0;
    while (i < d && ++counter[i] == nodes_per_dim) counter[i++] = 0;
    if (i == d) break;
  }
  HermiteExpansion coeffs(d);
  for (std::size_t k = 0; k < acc.size(); ++k) coeffs.add(index.indices[k], acc[k]);
  return coeffs;
}

EvalForm NonNegApprox::p_form() const {
  EvalForm f = EvalForm::expansion(p);
  f.direction = direction;
  return f;
}

std::optional<EvalForm> NonNegApprox::q_expansion_form() const {
  if (!q_expansion) return std::nullopt;
  EvalForm f = EvalForm::expansion(*q_expansion);
  f.direction = direction;
  return f;
}

CoefficientMethod default_method(const ConceptSet& s) {
  return exact_profile(s) ? CoefficientMethod::exact : CoefficientMethod::monte_carlo;
}

NonNegApprox construct(const ConceptSet& s, const GsaEstimate& gamma, double epsilon, CoefficientMethod method,
                       std::uint64_t sample_budget, std::uint64_t seed, const ConstructOptions& opts) {
  NonNegApprox out;
  out.params = choose_params(gamma.value, epsilon, method, sample_budget, seed, opts.estimation_budget_fraction);
  out.ambient_dim = s.dim();
  auto& diag = out.diagnostics;
  diag.gamma_source = gamma.source.empty() ? to_string(gamma.method) : gamma.source;
  diag.gamma_std_error = gamma.std_error;
  if (opts.t_override) {
    out.params.t = *opts.t_override;
    diag.t_overridden = true;
  }
  const std::uint64_t t = out.params.t;
  const double rho = out.params.rho;

  HermiteExpansion f_coeffs(1);
  std::optional<ExactProfile> profile;
  switch (method) {
    case CoefficientMethod::exact: {
      profile = exact_profile(s);
      if (!profile) {
        throw Unsupported("no exact coefficient path for set '" + s.kind_name() + "'; use --method mc");
      }
      if (t + 1 > opts.coefficient_cap) {
        throw BudgetExceeded("degree " + std::to_string(t) + " exceeds the coefficient cap");
      }
      f_coeffs = exact_coeffs_intervals(profile->intervals, t);
      out.direction = profile->direction;
      diag.coefficient_count = t + 1;
      diag.estimation_l2_bound = 0.0;
      break;
    }
    case CoefficientMethod::quadrature: {
      f_coeffs = quadrature_coeffs(s, t, opts.quadrature_nodes);
      diag.coefficient_count = count_multi_indices(t, s.dim());
      break;
    }
    case CoefficientMethod::monte_carlo: {
      const std::uint64_t count = count_multi_indices(t, s.dim());
      if (count > opts.coefficient_cap) {
        throw BudgetExceeded("coefficient count C(t+d, d) = " + std::to_string(count) + " for t = " +
                             std::to_string(t) + " exceeds the cap of " + std::to_string(opts.coefficient_cap));
      }
      const double slack = opts.estimation_budget_fraction * epsilon;
      const double needed = std::ceil(static_cast<double>(count) / (slack * slack));
      if (needed > static_cast<double>(sample_budget)) {
        throw BudgetExceeded("Monte Carlo coefficients need " + std::to_string(static_cast<std::uint64_t>(needed)) +
                             " samples; the budget is " + std::to_string(sample_budget));
      }
      const auto n = static_cast<std::uint64_t>(needed);
      CoefficientEstimate est = estimate_coeffs(s, t, n, seed, opts.coefficient_cap, opts.exec);
      f_coeffs = std::move(est.coeffs);
      double var = 0.0;
      for (const auto& [alpha, se] : est.std_errors) var += se * se;
      diag.coefficient_count = count;
      diag.coefficient_samples = n;
      diag.estimation_l2_bound = std::sqrt(static_cast<double>(count) / static_cast<double>(n));
      diag.estimation_l2_observed = std::sqrt(var);
      break;
    }
  }

  out.p = truncate(ou_apply(f_coeffs, rho), t);
  out.q_form = EvalForm::squared_affine(out.p);
  out.q_form.direction = out.direction;

  diag.truncation_tail_bound = std::pow(rho, static_cast<double>(t + 1));
  diag.smoothing_bound = 2.0 * std::sqrt(std::numbers::pi) * out.params.gamma * std::sqrt(1.0 - rho);

  if (profile) {
    if (rho == 0.0) {
      diag.tail_l2_mass = 0.0;
    } else {
      // Extend until rho^{T+1} <= 1e-12; the remainder is below that.
      const auto extended = static_cast<std::uint64_t>(
          std::min(50'000.0, std::max<double>(t + 1, std::ceil(std::log(1e-12) / std::log(rho)))));
      const auto full = exact_coeffs_intervals(profile->intervals, extended);
      double mass = 0.0;
      for (const auto& [alpha, c] : full.terms()) {
        const auto n = alpha.total_degree();
        if (n > t) mass += std::pow(rho, 2.0 * static_cast<double>(n)) * c * c;
      }
      diag.tail_l2_mass = std::sqrt(mass);
    }
  }

  if (opts.build_q_expansion) {
    const std::size_t pdim = out.p.dim();
    const double terms = static_cast<double>(out.p.size());
    const double work = pdim == 1 ? std::pow(static_cast<double>(t + 1), 3) / 3.0 : terms * terms;
    if (count_multi_indices(2 * t, pdim) <= opts.coefficient_cap && work <= 5e8) {
      out.q_expansion = affine_square(out.p);
    }
  }
  return out;
}

std::optional<std::uint64_t> minimal_empirical_t(const ConceptSet& s, const GsaEstimate& gamma, double epsilon,
                                                 std::span<const std::uint64_t> t_grid, CoefficientMethod method,
                                                 std::uint64_t sample_budget, std::uint64_t seed,
                                                 std::uint64_t l1_samples, const ConstructOptions& opts) {
  if (t_grid.empty()) throw InvalidArgument("degree grid must be non-empty");
  if (!std::is_sorted(t_grid.begin(), t_grid.end())) throw InvalidArgument("degree grid must be ascending");
  check_epsilon(epsilon);
  for (std::uint64_t t : t_grid) {
    ConstructOptions o = opts;
    o.t_override = t;
    o.build_q_expansion = false;
    const NonNegApprox approx = construct(s, gamma, epsilon, method, sample_budget, seed, o);
    const ErrorEstimate err = l1_error(approx.q_form, s, l1_samples, derive_seed(seed, kL1Stream), opts.exec);
    if (err.upper() <= epsilon) return t;
  }
  return std::nullopt;
}

}  // namespace nnapprox
