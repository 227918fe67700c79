#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nnapprox/concept_sets.hpp"
#include "nnapprox/hermite.hpp"
#include "nnapprox/sampling.hpp"

namespace nnapprox {

enum class CoefficientMethod { exact, quadrature, monte_carlo };

std::string to_string(CoefficientMethod m);
/// Accepts "exact", "quadrature", "mc" / "monte_carlo".
CoefficientMethod parse_coefficient_method(const std::string& s);

inline constexpr double kDefaultEstimationFraction = 0.25;

struct ConstructionParams {
  double epsilon = 0.0;
  double gamma = 0.0;
  double rho = 0.0;
  std::uint64_t t = 0;
  CoefficientMethod method = CoefficientMethod::exact;
  std::uint64_t sample_budget = 1;
  std::uint64_t seed = 0;
  double estimation_budget_fraction = kDefaultEstimationFraction;

  /// Accuracy target used for (rho, t): epsilon, or epsilon*(1-fraction)
  /// when coefficients are Monte Carlo estimates.
  double effective_epsilon() const;
};

/// rho = 1 - min{1, eps^2 / (16 pi gamma^2)}; t = smallest integer with
/// (t+1)(1-rho) >= log(2/eps), t = 0 when rho = 0. Rejects eps outside (0, 1/2).
ConstructionParams choose_params(double gamma, double epsilon, CoefficientMethod method, std::uint64_t sample_budget,
                                 std::uint64_t seed, double estimation_budget_fraction = kDefaultEstimationFraction);

/// Sets whose indicator depends on one coordinate u = <direction, x> and is
/// an interval union in u. direction is empty for genuinely 1-D sets and
/// for the trivial sets, which are constant in every coordinate.
struct ExactProfile {
  std::vector<Interval> intervals;
  std::optional<std::vector<double>> direction;
};

std::optional<ExactProfile> exact_profile(const ConceptSet& s);

/// Coefficients of f = 2*1_U - 1 in 1-D up to degree t:
/// c_0 = 2 gamma_1(U) - 1, c_n = 2/sqrt(n) * sum over intervals of
/// [h_{n-1}(lo) phi(lo) - h_{n-1}(hi) phi(hi)].
HermiteExpansion exact_coeffs_intervals(std::span<const Interval> intervals, std::uint64_t t);

/// f = 2*1_{x <= theta} - 1.
HermiteExpansion exact_coeffs_halfspace_1d(double theta, std::uint64_t t);

struct CoefficientEstimate {
  HermiteExpansion coeffs;
  std::map<MultiIndex, double> std_errors;
  std::uint64_t samples = 0;
};

inline constexpr std::uint64_t kDefaultCoefficientCap = 250'000;

/// Monte Carlo coefficients (1/n) sum_j f(x_j) h_a(x_j) for |a| <= t.
CoefficientEstimate estimate_coeffs(const ConceptSet& s, std::uint64_t t, std::uint64_t n, std::uint64_t seed,
                                    std::uint64_t coefficient_cap = kDefaultCoefficientCap,
                                    Execution exec = Execution::parallel);

/// Tensorized Gauss-Hermite coefficients; d <= 3 and t <= 30.
HermiteExpansion quadrature_coeffs(const ConceptSet& s, std::uint64_t t, std::size_t nodes_per_dim = 0);

struct Diagnostics {
  std::string gamma_source;
  double gamma_std_error = 0.0;
  std::uint64_t coefficient_count = 0;
  std::uint64_t coefficient_samples = 0;
  /// L2 error of the coefficient vector: 0 for exact, the certified
  /// sqrt(C/n) bound for Monte Carlo, unknown for quadrature.
  std::optional<double> estimation_l2_bound;
  /// sqrt of the summed squared standard errors (Monte Carlo only).
  std::optional<double> estimation_l2_observed;
  double truncation_tail_bound = 0.0;  // rho^{t+1}
  double smoothing_bound = 0.0;        // 2 sqrt(pi) gamma sqrt(1-rho)
  /// ||g - p||_2 computed from an extended exact expansion, when available.
  std::optional<double> tail_l2_mass;
  bool t_overridden = false;
};

struct NonNegApprox {
  /// Truncated smoothed expansion; 1-D in u = <direction, x> when projected.
  HermiteExpansion p{1};
  std::optional<std::vector<double>> direction;
  EvalForm q_form;
  std::optional<HermiteExpansion> q_expansion;
  ConstructionParams params;
  Diagnostics diagnostics;
  std::size_t ambient_dim = 1;

  EvalForm p_form() const;
  std::optional<EvalForm> q_expansion_form() const;
};

struct ConstructOptions {
  double estimation_budget_fraction = kDefaultEstimationFraction;
  std::uint64_t coefficient_cap = kDefaultCoefficientCap;
  /// Replaces the formula degree (used by empirical degree searches).
  std::optional<std::uint64_t> t_override;
  bool build_q_expansion = true;
  std::size_t quadrature_nodes = 0;
  Execution exec = Execution::parallel;
};

/// f = 2*1_H - 1, g = T_rho f, p = truncation of g to degree t,
/// q = (1 + p)^2 / 4.
NonNegApprox construct(const ConceptSet& s, const GsaEstimate& gamma, double epsilon, CoefficientMethod method,
                       std::uint64_t sample_budget, std::uint64_t seed, const ConstructOptions& opts = {});

/// Picks exact when the set has an exact profile, Monte Carlo otherwise.
CoefficientMethod default_method(const ConceptSet& s);

/// Smallest t in the ascending grid whose constructed q has Monte Carlo
/// L1 error upper confidence bound <= epsilon; nullopt if none does.
std::optional<std::uint64_t> minimal_empirical_t(const ConceptSet& s, const GsaEstimate& gamma, double epsilon,
                                                 std::span<const std::uint64_t> t_grid, CoefficientMethod method,
                                                 std::uint64_t sample_budget, std::uint64_t seed,
                                                 std::uint64_t l1_samples, const ConstructOptions& opts = {});

}  // namespace nnapprox
