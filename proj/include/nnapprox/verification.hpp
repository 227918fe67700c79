#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nnapprox/concept_sets.hpp"
#include "nnapprox/construction.hpp"
#include "nnapprox/hermite.hpp"
#include "nnapprox/sampling.hpp"

namespace nnapprox {

inline constexpr double kDefaultConfidence = 0.95;
inline constexpr std::uint64_t kMinConfidenceSamples = 1000;
/// Largest admissible rho^{T+1} for the reference expansion of g.
inline constexpr double kReferenceTailTolerance = 1e-8;

/// Monte Carlo mean with a two-sided normal confidence interval.
struct ErrorEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t n = 0;
  double confidence_level = kDefaultConfidence;

  double z() const;
  double upper() const { return mean + z() * std_error; }
  double lower() const { return mean - z() * std_error; }
};

enum class Verdict { holds, holds_within_ci, violated };

std::string to_string(Verdict v);

/// lhs <= rhs, judged on the confidence interval when lhs is an estimate:
/// holds if the upper bound is <= rhs, violated if the lower bound is > rhs.
struct BoundCheck {
  std::string name;
  std::variant<ErrorEstimate, double> lhs;
  double rhs = 0.0;
  Verdict verdict = Verdict::holds;
  std::string note;

  static BoundCheck make(std::string name, std::variant<ErrorEstimate, double> lhs, double rhs, std::string note = {});
  double lhs_value() const;
};

/// E|approx(x) - 1_H(x)| under gamma_d. Refuses n < 1000.
ErrorEstimate l1_error(const EvalForm& approx, const ConceptSet& s, std::uint64_t n, std::uint64_t seed,
                       Execution exec = Execution::parallel);
ErrorEstimate l1_error(const HermiteExpansion& approx, const ConceptSet& s, std::uint64_t n, std::uint64_t seed,
                       Execution exec = Execution::parallel);

/// Smallest T >= 200 with rho^{T+1} <= tol.
std::uint64_t certified_reference_degree(double rho, double tol = kReferenceTailTolerance);

/// ||f - T_rho f||_1 <= 2 sqrt(pi) gamma sqrt(1 - rho), with T_rho f evaluated
/// from its exact expansion of degree t_ref. Needs an exact profile.
BoundCheck check_smoothing_bound(const ConceptSet& s, double gamma, double rho, std::uint64_t t_ref, std::uint64_t n,
                                 std::uint64_t seed, Execution exec = Execution::parallel);

/// ||g - p||_2 <= rho^{t+1}, computed from the coefficients of f (a +-1
/// function, exact to degree T_ref > t) plus rho^{2(T_ref+1)} times the
/// Parseval remainder 1 - sum c^2 for the unseen coefficients.
BoundCheck check_truncation_bound(const HermiteExpansion& coeffs_f, double rho, std::uint64_t t);

/// Every inequality of the error argument, from the triangle split of
/// ||q - h||_1 to the final comparison with epsilon.
std::vector<BoundCheck> check_proof_chain(const ConceptSet& s, const ConstructionParams& params, std::uint64_t n,
                                          std::uint64_t seed, std::optional<std::uint64_t> t_ref = std::nullopt,
                                          Execution exec = Execution::parallel);

/// Counts negative values of the form over n Gaussian samples plus a
/// deterministic grid along axes and diagonals out to |x_i| = 8.
BoundCheck check_nonnegativity(const EvalForm& form, std::uint64_t n, std::uint64_t seed,
                               Execution exec = Execution::parallel);
BoundCheck check_nonnegativity(const NonNegApprox& approx, std::uint64_t n, std::uint64_t seed,
                               Execution exec = Execution::parallel);

/// Deterministic far-tail grid, flattened row-major with `dim` columns.
std::vector<double> tail_grid(std::size_t dim);

}  // namespace nnapprox
