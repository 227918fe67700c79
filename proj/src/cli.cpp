#include "nnapprox/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include "nnapprox/concept_sets.hpp"
#include "nnapprox/construction.hpp"
#include "nnapprox/documents.hpp"
#include "nnapprox/errors.hpp"
#include "nnapprox/experiments.hpp"
#include "nnapprox/verification.hpp"

namespace nnapprox {
namespace {

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    double v;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw InvalidArgument("cannot parse list element '" + item + "'");
    }
    if (used != item.size()) throw InvalidArgument("cannot parse list element '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<std::uint64_t> parse_degrees(const std::string& text) {
  std::vector<std::uint64_t> out;
  for (double v : parse_list(text)) {
    if (!(v >= 0.0) || v != std::floor(v)) throw InvalidArgument("degrees must be non-negative integers");
    out.push_back(static_cast<std::uint64_t>(v));
  }
  return out;
}

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) {
    throw InvalidArgument("--epsilon " + format_double(epsilon) +
                          " is outside the open interval (0, 1/2) required for the construction");
  }
}

GsaMode parse_gsa_mode(const std::string& s) {
  if (s == "auto") return GsaMode::automatic;
  if (s == "closed") return GsaMode::closed_form;
  if (s == "thickening") return GsaMode::thickening;
  throw InvalidArgument("unknown GSA method '" + s + "' (expected auto|closed|thickening)");
}

/// auto | closed | thickening | class-intersection:M | class-convex:D | value:X
GsaEstimate resolve_gamma(const ConceptSet& s, const std::string& spec, const ThickeningOptions& thick) {
  auto suffix = [&](const std::string& prefix) -> std::optional<double> {
    if (spec.rfind(prefix, 0) != 0) return std::nullopt;
    const auto values = parse_list(spec.substr(prefix.size()));
    if (values.size() != 1) throw InvalidArgument("--gsa " + spec + ": expected one number");
    return values[0];
  };
  if (auto m = suffix("class-intersection:")) {
    return {gsa_class_bound(IntersectionClass{*m}), 0.0, GsaMethod::class_bound,
            "class_bound:intersection(m=" + format_double(*m) + ")"};
  }
  if (auto d = suffix("class-convex:")) {
    if (!(*d >= 1.0) || *d != std::floor(*d)) throw InvalidArgument("class-convex needs an integer d >= 1");
    return {gsa_class_bound(ConvexClass{static_cast<std::uint64_t>(*d)}), 0.0, GsaMethod::class_bound,
            "class_bound:convex(d=" + format_double(*d) + ")"};
  }
  if (auto v = suffix("value:")) {
    if (!(*v >= 0.0)) throw InvalidArgument("--gsa value must be non-negative");
    return {*v, 0.0, GsaMethod::user_value, "user_value"};
  }
  return gsa(s, parse_gsa_mode(spec), thick);
}

std::string describe(const std::variant<ErrorEstimate, double>& lhs) {
  std::ostringstream ss;
  ss << std::setprecision(6);
  if (const auto* e = std::get_if<ErrorEstimate>(&lhs)) {
    ss << e->mean << " +- " << e->std_error << " (upper " << e->upper() << ")";
  } else {
    ss << std::get<double>(lhs);
  }
  return ss.str();
}

void print_checks(const std::vector<BoundCheck>& checks, std::ostream& out) {
  for (const auto& c : checks) {
    out << std::left << std::setw(16) << to_string(c.verdict) << c.name << "\n"
        << "                lhs = " << describe(c.lhs) << ", rhs = " << std::setprecision(6) << c.rhs;
    if (!c.note.empty()) out << "  [" << c.note << "]";
    out << "\n";
  }
}

void print_approx(const NonNegApprox& a, std::ostream& out) {
  const auto& p = a.params;
  const auto& d = a.diagnostics;
  out << std::setprecision(10);
  out << "epsilon            " << p.epsilon << "\n"
      << "gamma              " << p.gamma << " (" << d.gamma_source << ")\n"
      << "rho                " << p.rho << "\n"
      << "t                  " << p.t << (d.t_overridden ? " (override)" : "") << "\n"
      << "deg(q)             " << 2 * p.t << "\n"
      << "deg(q) attained    " << 2 * a.p.degree() << "\n"
      << "method             " << to_string(p.method) << "\n"
      << "coefficients       " << d.coefficient_count << "\n";
  if (p.method == CoefficientMethod::monte_carlo) {
    out << "coeff samples      " << d.coefficient_samples << "\n"
        << "estimation bound   " << d.estimation_l2_bound.value_or(0.0) << " (budget fraction "
        << p.estimation_budget_fraction << ")\n";
  }
  out << "tail bound         " << d.truncation_tail_bound << "\n"
      << "smoothing bound    " << d.smoothing_bound << "\n";
  if (d.tail_l2_mass) out << "tail L2 mass       " << *d.tail_l2_mass << "\n";
  if (a.direction) out << "projected          yes\n";
}


int cmd_construct(const std::string& set_path, double epsilon, const std::string& gsa_spec,
                  const std::string& method_name, std::uint64_t budget, std::uint64_t seed,
                  const std::string& out_path, const std::string& representation, std::uint64_t cap,
                  double fraction, const ThickeningOptions& thick, std::ostream& out) {
  check_epsilon(epsilon);
  const ConceptSet s = load_set_spec(set_path);
  const GsaEstimate gamma = resolve_gamma(s, gsa_spec, thick);
  const CoefficientMethod method = method_name == "auto" ? default_method(s) : parse_coefficient_method(method_name);
  ConstructOptions opts;
  opts.coefficient_cap = cap;
  opts.estimation_budget_fraction = fraction;
  const NonNegApprox approx = construct(s, gamma, epsilon, method, budget, seed, opts);
  if (representation != "squared_affine" && representation != "expansion") {
    throw InvalidArgument("--representation must be squared_affine or expansion");
  }
  save_polynomial_document(make_document(approx, representation == "squared_affine"), out_path);
  print_approx(approx, out);
  out << "wrote              " << out_path << "\n";
  return kExitOk;
}

int cmd_check(const std::string& poly_path, const std::string& set_path, const std::string& selector,
              std::uint64_t n, std::uint64_t seed, std::optional<double> epsilon_override, std::ostream& out) {
  if (selector != "definition" && selector != "lemma" && selector != "chain" && selector != "all") {
    throw InvalidArgument("--checks must be one of definition|lemma|chain|all");
  }
  const PolynomialDocument doc = load_polynomial_document(poly_path);
  const ConceptSet s = load_set_spec(set_path);
  if (doc.dim() != s.dim()) throw DimensionMismatch(s.dim(), doc.dim());

  std::optional<double> epsilon = epsilon_override;
  if (!epsilon && doc.params) epsilon = doc.params->epsilon;

  std::vector<BoundCheck> checks;
  if (selector == "definition" || selector == "all") {
    if (!epsilon) throw InvalidArgument("definition check needs --epsilon (document carries no params)");
    const ErrorEstimate err = l1_error(doc.form, s, n, seed);
    checks.push_back(BoundCheck::make("definition: E|q - 1_H| <= epsilon", err, *epsilon,
                                      "n = " + std::to_string(err.n)));
    checks.push_back(check_nonnegativity(doc.form, n, derive_seed(seed, 1)));
  }
  if (selector == "lemma" || selector == "chain" || selector == "all") {
    if (!exact_profile(s)) {
      throw Unsupported("lemma and chain checks run only on sets with an exact coefficient path "
                        "(1-D interval unions, halfspaces, trivial sets); '" + s.kind_name() +
                        "' is a documented limitation");
    }
    if (!doc.params) throw InvalidArgument("lemma and chain checks need the document's construction params");
    ConstructionParams params = *doc.params;
    if (epsilon) params.epsilon = *epsilon;
    if (selector == "lemma") {
      const double rho = params.rho;
      const std::uint64_t t_ref = std::max<std::uint64_t>(params.t + 1, rho < 1.0 ? certified_reference_degree(rho) : 200);
      checks.push_back(check_smoothing_bound(s, params.gamma, rho, t_ref, n, derive_seed(seed, 2)));
      checks.push_back(check_truncation_bound(exact_coeffs_intervals(exact_profile(s)->intervals, t_ref), rho, params.t));
    } else {
      auto chain = check_proof_chain(s, params, n, derive_seed(seed, 3));
      checks.insert(checks.end(), chain.begin(), chain.end());
    }
  }
  print_checks(checks, out);
  const bool violated = std::any_of(checks.begin(), checks.end(), [](const BoundCheck& c) {
    return c.verdict == Verdict::violated;
  });
  out << (violated ? "result: VIOLATED\n" : "result: ok\n");
  return violated ? kExitViolated : kExitOk;
}

int cmd_gsa(const std::string& set_path, const std::string& method, const ThickeningOptions& thick,
            std::ostream& out) {
  const ConceptSet s = load_set_spec(set_path);
  const GsaEstimate g = gsa(s, parse_gsa_mode(method), thick);
  out << std::setprecision(10) << "gsa        " << g.value << "\n"
      << "std_error  " << g.std_error << "\n"
      << "method     " << to_string(g.method) << "\n";
  return kExitOk;
}

int cmd_sweep(SweepOptions opts, const std::string& method, const std::string& out_path, std::ostream& out) {
  if (method != "auto") opts.method = parse_coefficient_method(method);
  if (opts.family != SweepFamily::epsilon) check_epsilon(opts.epsilon);
  for (double e : opts.range) {
    if (opts.family == SweepFamily::epsilon) check_epsilon(e);
  }
  const auto rows = run_sweep(opts);
  const std::string csv = sweep_csv(rows);
  if (out_path.empty() || out_path == "-") {
    out << csv;
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw InvalidArgument("cannot write '" + out_path + "'");
    f << csv;
    out << "wrote " << rows.size() << " rows to " << out_path << "\n";
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Non-negative L1-approximating polynomials under the Gaussian measure", "nnapprox"};
  app.require_subcommand(1);

  ThickeningOptions thick;
  std::string delta_list = "0.1,0.05,0.025";

  // construct
  auto* construct_cmd = app.add_subcommand("construct", "Build q = (1+p)^2/4 for a set and write it as JSON");
  std::string c_set, c_out, c_gsa = "auto", c_method = "auto", c_rep = "squared_affine";
  double c_eps = 0.0, c_fraction = kDefaultEstimationFraction;
  std::uint64_t c_budget = 100'000'000, c_seed = 0, c_cap = kDefaultCoefficientCap;
  construct_cmd->add_option("--set", c_set, "Set specification (JSON)")->required();
  construct_cmd->add_option("--epsilon", c_eps, "Target L1 error in (0, 1/2)")->required();
  construct_cmd->add_option("--gsa", c_gsa,
                            "auto|closed|thickening|class-intersection:M|class-convex:D|value:X");
  construct_cmd->add_option("--method", c_method, "auto|exact|quadrature|mc");
  construct_cmd->add_option("--budget", c_budget, "Maximum Monte Carlo samples for coefficients");
  construct_cmd->add_option("--seed", c_seed, "Base random seed");
  construct_cmd->add_option("--out", c_out, "Output polynomial document")->required();
  construct_cmd->add_option("--representation", c_rep, "squared_affine|expansion");
  construct_cmd->add_option("--coefficient-cap", c_cap, "Maximum number of Hermite coefficients");
  construct_cmd->add_option("--estimation-fraction", c_fraction, "Share of epsilon reserved for estimation error");
  construct_cmd->add_option("--delta-list", delta_list, "Thickening widths when --gsa thickening");
  construct_cmd->add_option("--gsa-samples", thick.samples, "Samples per thickening width");

  // check
  auto* check_cmd = app.add_subcommand("check", "Verify a polynomial document against a set");
  std::string k_poly, k_set, k_checks = "definition";
  std::uint64_t k_n = 1'000'000, k_seed = 0;
  std::optional<double> k_eps;
  check_cmd->add_option("--poly", k_poly, "Polynomial document")->required();
  check_cmd->add_option("--set", k_set, "Set specification (JSON)")->required();
  check_cmd->add_option("--checks", k_checks, "definition|lemma|chain|all");
  check_cmd->add_option("--n", k_n, "Monte Carlo samples");
  check_cmd->add_option("--seed", k_seed, "Base random seed");
  check_cmd->add_option("--epsilon", k_eps, "Override the document's epsilon");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Degree-scaling experiments written as CSV");
  SweepOptions s_opts;
  std::string s_family, s_range, s_method = "auto", s_out, s_grid;
  sweep_cmd->add_option("--family", s_family, "intersection-m|ball-d|epsilon")->required();
  sweep_cmd->add_option("--range", s_range, "Comma-separated m, d or epsilon values")->required();
  sweep_cmd->add_option("--epsilon", s_opts.epsilon, "Target error (intersection-m, ball-d)");
  sweep_cmd->add_option("--theta", s_opts.theta, "Halfspace threshold (epsilon family)");
  sweep_cmd->add_option("--radius", s_opts.radius, "Ball radius (ball-d family)");
  sweep_cmd->add_option("--offset", s_opts.facet_offset, "Facet offset (intersection-m family)");
  sweep_cmd->add_option("--dim", s_opts.intersection_dim, "Ambient dimension (intersection-m family)");
  sweep_cmd->add_option("--method", s_method, "auto|exact|quadrature|mc");
  sweep_cmd->add_option("--budget", s_opts.sample_budget, "Maximum Monte Carlo samples for coefficients");
  sweep_cmd->add_option("--seed", s_opts.seed, "Base random seed");
  sweep_cmd->add_option("--n", s_opts.l1_samples, "L1 Monte Carlo samples per row");
  sweep_cmd->add_option("--t-grid", s_grid, "Comma-separated degree grid for the empirical search");
  sweep_cmd->add_option("--coefficient-cap", s_opts.coefficient_cap, "Maximum number of Hermite coefficients");
  sweep_cmd->add_option("--out", s_out, "Output CSV (default: stdout)");

  // gsa
  auto* gsa_cmd = app.add_subcommand("gsa", "Gaussian surface area of a set");
  std::string g_set, g_method = "auto";
  gsa_cmd->add_option("--set", g_set, "Set specification (JSON)")->required();
  gsa_cmd->add_option("--method", g_method, "auto|closed|thickening");
  gsa_cmd->add_option("--delta-list", delta_list, "Comma-separated thickening widths");
  gsa_cmd->add_option("--n", thick.samples, "Samples per thickening width");
  gsa_cmd->add_option("--seed", thick.seed, "Base random seed");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }

  try {
    thick.deltas = parse_list(delta_list);
    if (*construct_cmd) {
      thick.seed = c_seed;
      return cmd_construct(c_set, c_eps, c_gsa, c_method, c_budget, c_seed, c_out, c_rep, c_cap, c_fraction, thick,
                           out);
    }
    if (*check_cmd) return cmd_check(k_poly, k_set, k_checks, k_n, k_seed, k_eps, out);
    if (*gsa_cmd) return cmd_gsa(g_set, g_method, thick, out);
    if (*sweep_cmd) {
      s_opts.family = parse_sweep_family(s_family);
      s_opts.range = parse_list(s_range);
      if (!s_grid.empty()) s_opts.t_grid = parse_degrees(s_grid);
      return cmd_sweep(s_opts, s_method, s_out, out);
    }
  } catch (const BudgetExceeded& e) {
    err << "error: budget exceeded: " << e.what() << "\n";
    return kExitBudget;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const Unsupported& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}

}  // namespace nnapprox
