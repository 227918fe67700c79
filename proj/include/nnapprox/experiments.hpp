#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nnapprox/concept_sets.hpp"
#include "nnapprox/construction.hpp"
#include "nnapprox/documents.hpp"

namespace nnapprox {

enum class SweepFamily { intersection_m, ball_d, epsilon };

SweepFamily parse_sweep_family(const std::string& s);
std::string to_string(SweepFamily f);

struct SweepOptions {
  SweepFamily family = SweepFamily::epsilon;
  /// m values, ball dimensions, or epsilon values depending on the family.
  std::vector<double> range;
  double epsilon = 0.3;
  /// Threshold of the halfspace in the epsilon family.
  double theta = 0.0;
  double radius = 1.0;
  /// Facet offset and ambient dimension of the intersection family.
  double facet_offset = 1.0;
  std::size_t intersection_dim = 3;
  std::optional<CoefficientMethod> method;
  std::uint64_t sample_budget = 100'000'000;
  std::uint64_t seed = 0;
  std::uint64_t l1_samples = 200'000;
  std::vector<std::uint64_t> t_grid;  // empty: default_t_grid()
  std::uint64_t coefficient_cap = kDefaultCoefficientCap;
  Execution exec = Execution::parallel;
};

std::vector<std::uint64_t> default_t_grid();

/// m halfspaces {<w_i, x> <= offset} with normals spread over the sphere
/// (Fibonacci lattice for d = 3, seeded Gaussian directions otherwise).
ConceptSet spread_intersection(std::size_t m, std::size_t dim, double offset, std::uint64_t seed = 0);

/// One row per range point. Each row reports the formula degree; q is
/// measured at the formula degree when its coefficients fit the budget,
/// otherwise at the empirical minimal degree from the grid.
std::vector<ExperimentRow> run_sweep(const SweepOptions& opts);

std::string sweep_csv(const std::vector<ExperimentRow>& rows);

/// Ordinary least-squares fit y = a + b x and its coefficient of determination.
struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
  double r_squared = 0.0;
};

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace nnapprox
