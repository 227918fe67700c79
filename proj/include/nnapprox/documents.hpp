#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nnapprox/concept_sets.hpp"
#include "nnapprox/construction.hpp"
#include "nnapprox/hermite.hpp"

namespace nnapprox {

inline constexpr int kPolynomialFormatVersion = 1;
inline constexpr std::string_view kBasisTag = "hermite-probabilists-orthonormal";

/// Set specification (JSON). Field names:
///   kind: halfspace | intersection | ball | interval_union | full | empty
///   dim: positive integer
///   w, theta               (halfspace)
///   halfspaces: [{w, theta}] (intersection)
///   center, radius         (ball)
///   intervals: [[lo, hi]]  (interval_union; "-inf"/"inf" allowed)
///   signed_distance: bool  (optional, default true)
ConceptSet parse_set_spec(std::string_view text);
ConceptSet load_set_spec(const std::filesystem::path& path);
std::string serialize_set_spec(const ConceptSet& s);

/// Serialized polynomial with its construction record.
struct PolynomialDocument {
  int format_version = kPolynomialFormatVersion;
  EvalForm form;
  std::optional<ConstructionParams> params;
  std::optional<Diagnostics> diagnostics;

  std::size_t dim() const { return form.ambient_dim(); }
};

PolynomialDocument make_document(const NonNegApprox& approx, bool squared_affine = true);

std::string serialize(const PolynomialDocument& doc);
PolynomialDocument parse_polynomial_document(std::string_view text);
PolynomialDocument load_polynomial_document(const std::filesystem::path& path);
void save_polynomial_document(const PolynomialDocument& doc, const std::filesystem::path& path);

/// One sweep measurement. Column order is frozen; see kExperimentColumns.
struct ExperimentRow {
  std::string set;
  double epsilon = 0.0;
  double gamma = 0.0;
  double rho = 0.0;
  std::uint64_t t_formula = 0;
  std::optional<std::uint64_t> t_empirical;
  std::uint64_t deg_q = 0;
  double l1_mean = 0.0;
  double l1_std_error = 0.0;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  std::string gamma_source;
  std::string method;
  std::uint64_t coeff_samples = 0;
  double l1_upper = 0.0;
};

extern const std::vector<std::string_view> kExperimentColumns;

std::string csv_header();
std::string csv_line(const ExperimentRow& row);
/// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

std::string read_file(const std::filesystem::path& path);

}  // namespace nnapprox
