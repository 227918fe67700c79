#include "nnapprox/experiments.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "nnapprox/errors.hpp"
#include "nnapprox/verification.hpp"

namespace nnapprox {
namespace {

// Per-row seed streams.
constexpr std::uint64_t kCoefficientStream = 1;
constexpr std::uint64_t kL1Stream = 2;

std::string compact(double v) {
  std::string s = format_double(v);
  for (char& c : s) {
    if (c == '.') c = 'p';
    if (c == '-') c = 'm';
  }
  return s;
}

std::uint64_t as_count(double v, const char* what) {
  if (!(v >= 1.0) || v != std::floor(v)) {
    throw InvalidArgument(std::string(what) + " values must be positive integers");
  }
  return static_cast<std::uint64_t>(v);
}

bool formula_degree_fits(const ConceptSet& s, const ConstructionParams& p, const SweepOptions& opts) {
  if (p.method == CoefficientMethod::exact) return p.t + 1 <= opts.coefficient_cap;
  if (p.method == CoefficientMethod::quadrature) return s.dim() <= 3 && p.t <= 30;
  const std::uint64_t count = count_multi_indices(p.t, s.dim());
  if (count > opts.coefficient_cap) return false;
  const double slack = p.estimation_budget_fraction * p.epsilon;
  return static_cast<double>(count) / (slack * slack) <= static_cast<double>(opts.sample_budget);
}

// Grid points whose coefficients fit the caps.
std::vector<std::uint64_t> feasible_grid(const ConceptSet& s, const ConstructionParams& base, const SweepOptions& opts) {
  std::vector<std::uint64_t> grid = opts.t_grid.empty() ? default_t_grid() : opts.t_grid;
  std::vector<std::uint64_t> out;
  for (std::uint64_t t : grid) {
    ConstructionParams p = base;
    p.t = t;
    if (formula_degree_fits(s, p, opts)) out.push_back(t);
  }
  return out;
}

}  // namespace

SweepFamily parse_sweep_family(const std::string& s) {
  if (s == "intersection-m") return SweepFamily::intersection_m;
  if (s == "ball-d") return SweepFamily::ball_d;
  if (s == "epsilon") return SweepFamily::epsilon;
  throw InvalidArgument("unknown sweep family '" + s + "' (expected intersection-m|ball-d|epsilon)");
}

std::string to_string(SweepFamily f) {
  switch (f) {
    case SweepFamily::intersection_m: return "intersection-m";
    case SweepFamily::ball_d: return "ball-d";
    case SweepFamily::epsilon: return "epsilon";
  }
  return "unknown";
}

std::vector<std::uint64_t> default_t_grid() {
  return {0, 1, 2, 3, 4, 5, 6, 8, 10, 12, 14, 16, 20, 24, 28, 32, 40, 48, 64, 96, 128, 192, 256, 384, 512};
}

ConceptSet spread_intersection(std::size_t m, std::size_t dim, double offset, std::uint64_t seed) {
  if (m == 0) throw InvalidArgument("intersection needs at least one halfspace");
  std::vector<Halfspace> hs;
  if (dim == 3) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (std::size_t i = 0; i < m; ++i) {
      const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(m);
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden * static_cast<double>(i);
      hs.push_back(Halfspace{{r * std::cos(phi), r * std::sin(phi), z}, offset});
    }
  } else {
    std::mt19937_64 rng(derive_seed(seed, 0));
    std::normal_distribution<double> normal;
    for (std::size_t i = 0; i < m; ++i) {
      std::vector<double> w(dim);
      draw_gaussian(rng, normal, w);
      hs.push_back(Halfspace{std::move(w), offset});
    }
  }
  return ConceptSet::intersection(dim, std::move(hs));
}

std::vector<ExperimentRow> run_sweep(const SweepOptions& opts) {
  if (opts.range.empty()) throw InvalidArgument("sweep range must be non-empty");
  std::vector<ExperimentRow> rows;
  for (std::size_t i = 0; i < opts.range.size(); ++i) {
    const double v = opts.range[i];
    const std::uint64_t row_seed = derive_seed(opts.seed, i);
    double epsilon = opts.epsilon;
    std::optional<ConceptSet> set;
    GsaEstimate gamma;
    std::string label;
    CoefficientMethod method = CoefficientMethod::monte_carlo;

    switch (opts.family) {
      case SweepFamily::intersection_m: {
        const std::uint64_t m = as_count(v, "intersection-m");
        set = spread_intersection(m, opts.intersection_dim, opts.facet_offset, opts.seed);
        gamma = GsaEstimate{gsa_class_bound(IntersectionClass{static_cast<double>(m)}), 0.0, GsaMethod::class_bound,
                            "class_bound:intersection"};
        label = "intersection-m" + std::to_string(m) + "-d" + std::to_string(opts.intersection_dim) + "-offset" +
                compact(opts.facet_offset);
        method = opts.method.value_or(CoefficientMethod::monte_carlo);
        break;
      }
      case SweepFamily::ball_d: {
        const std::uint64_t d = as_count(v, "ball-d");
        set = ConceptSet::ball(std::vector<double>(d, 0.0), opts.radius);
        gamma = gsa(*set, GsaMode::closed_form);
        label = "ball-d" + std::to_string(d) + "-r" + compact(opts.radius);
        method = opts.method.value_or(default_method(*set));
        break;
      }
      case SweepFamily::epsilon: {
        epsilon = v;
        set = ConceptSet::halfspace({1.0}, opts.theta);
        gamma = gsa(*set, GsaMode::closed_form);
        label = "halfspace-d1-theta" + compact(opts.theta);
        method = opts.method.value_or(default_method(*set));
        break;
      }
    }

    const ConstructionParams formula = choose_params(gamma.value, epsilon, method, opts.sample_budget, row_seed);
    ConstructOptions copts;
    copts.coefficient_cap = opts.coefficient_cap;
    copts.build_q_expansion = false;
    copts.exec = opts.exec;

    const std::vector<std::uint64_t> grid = feasible_grid(*set, formula, opts);
    std::optional<std::uint64_t> t_empirical;
    if (!grid.empty()) {
      t_empirical = minimal_empirical_t(*set, gamma, epsilon, grid, method, opts.sample_budget,
                                        derive_seed(row_seed, kCoefficientStream), opts.l1_samples, copts);
    }

    if (!formula_degree_fits(*set, formula, opts)) {
      if (t_empirical) copts.t_override = *t_empirical;
      else if (!grid.empty()) copts.t_override = grid.back();
      else throw BudgetExceeded("no feasible degree for row '" + label + "' under the sample and coefficient caps");
    }
    const NonNegApprox approx = construct(*set, gamma, epsilon, method, opts.sample_budget,
                                          derive_seed(row_seed, kCoefficientStream), copts);
    const ErrorEstimate err =
        l1_error(approx.q_form, *set, opts.l1_samples, derive_seed(row_seed, kL1Stream), opts.exec);

    ExperimentRow row;
    row.set = label;
    row.epsilon = epsilon;
    row.gamma = gamma.value;
    row.rho = formula.rho;
    row.t_formula = formula.t;
    row.t_empirical = t_empirical;
    row.deg_q = 2 * approx.params.t;
    row.l1_mean = err.mean;
    row.l1_std_error = err.std_error;
    row.l1_upper = err.upper();
    row.n = err.n;
    row.seed = row_seed;
    row.gamma_source = gamma.source.empty() ? to_string(gamma.method) : gamma.source;
    row.method = to_string(method);
    row.coeff_samples = approx.diagnostics.coefficient_samples;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string sweep_csv(const std::vector<ExperimentRow>& rows) {
  std::string out = csv_header();
  for (const auto& r : rows) out += csv_line(r);
  return out;
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("line fit needs at least two paired points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw InvalidArgument("line fit needs distinct x values");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss_res += r * r;
  }
  fit.r_squared = syy == 0.0 ? 1.0 : 1.0 - ss_res / syy;
  return fit;
}

}  // namespace nnapprox
