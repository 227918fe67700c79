#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace nnapprox {

/// Orthonormal probabilists' Hermite polynomial h_n = He_n / sqrt(n!).
double hermite_eval(unsigned n, double x);

/// Fills out[k] = h_k(x) for k = 0..out.size()-1.
void hermite_table(double x, std::span<double> out);

/// Exponent vector over d coordinates. Ordered by total degree, then
/// lexicographically, so maps keyed on it iterate in graded order.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<std::uint32_t> exponents);

  /// Multi-index of length `dim` with a single nonzero exponent.
  static MultiIndex unit(std::size_t dim, std::size_t coord, std::uint32_t degree);
  static MultiIndex zero(std::size_t dim) { return MultiIndex(std::vector<std::uint32_t>(dim, 0)); }

  std::size_t size() const { return exponents_.size(); }
  std::uint64_t total_degree() const { return total_degree_; }
  std::uint32_t operator[](std::size_t i) const { return exponents_[i]; }
  const std::vector<std::uint32_t>& exponents() const { return exponents_; }

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
  friend std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b);

 private:
  std::vector<std::uint32_t> exponents_;
  std::uint64_t total_degree_ = 0;
};

/// Number of multi-indices in d variables with total degree <= t, i.e.
/// C(t+d, d). Saturates at UINT64_MAX.
std::uint64_t count_multi_indices(std::uint64_t t, std::size_t d);

/// All multi-indices in d variables with total degree <= t, graded order.
std::vector<MultiIndex> enumerate_multi_indices(std::size_t d, std::uint32_t t);

/// Sparse expansion in the tensorized orthonormal Hermite basis of L2(gamma_d).
/// Stored coefficients are never exactly zero.
class HermiteExpansion {
 public:
  using Terms = std::map<MultiIndex, double>;

  explicit HermiteExpansion(std::size_t dim);
  HermiteExpansion(std::size_t dim, Terms terms);

  static HermiteExpansion constant(std::size_t dim, double c);
  /// 1-D expansion from dense coefficients indexed by degree.
  static HermiteExpansion from_dense_1d(std::span<const double> coeffs);

  std::size_t dim() const { return dim_; }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  /// Largest total degree among stored terms; 0 for the zero expansion.
  std::uint64_t degree() const;
  double coefficient(const MultiIndex& alpha) const;

  /// Adds c to the coefficient of alpha, pruning exact zeros.
  void add(const MultiIndex& alpha, double c);

  /// Dense coefficients by degree (1-D only).
  std::vector<double> dense_1d() const;

  friend bool operator==(const HermiteExpansion&, const HermiteExpansion&) = default;

 private:
  std::size_t dim_;
  Terms terms_;
};

/// Flattened form of an expansion for repeated evaluation. Thread-safe;
/// callers pass their own scratch buffer.
class ExpansionEvaluator {
 public:
  explicit ExpansionEvaluator(const HermiteExpansion& e);

  std::size_t dim() const { return dim_; }
  std::size_t scratch_size() const { return table_size_; }
  double operator()(std::span<const double> x, std::span<double> scratch) const;

 private:
  std::size_t dim_;
  bool dense_1d_ = false;
  std::vector<double> coeffs_;
  std::vector<std::uint32_t> exponents_;  // row-major, one row of dim_ per term
  std::vector<std::size_t> offsets_;      // table offset per coordinate
  std::vector<std::uint32_t> max_degree_;
  std::size_t table_size_ = 0;
};

double expansion_eval(const HermiteExpansion& e, std::span<const double> x);

/// Evaluation representation of a polynomial. When `direction` is set, the
/// stored expansion is one-dimensional in u = <direction, x> and the form
/// lives in R^{direction.size()}.
struct EvalForm {
  enum class Representation { expansion, squared_affine };

  Representation representation = Representation::expansion;
  HermiteExpansion poly{1};
  std::optional<std::vector<double>> direction;

  static EvalForm expansion(HermiteExpansion e) {
    return {Representation::expansion, std::move(e), std::nullopt};
  }
  /// x -> (1 + P(x))^2 / 4.
  static EvalForm squared_affine(HermiteExpansion p) {
    return {Representation::squared_affine, std::move(p), std::nullopt};
  }

  std::size_t ambient_dim() const { return direction ? direction->size() : poly.dim(); }
};

double expansion_eval(const EvalForm& form, std::span<const double> x);

/// Reusable evaluator for EvalForm; same threading contract as
/// ExpansionEvaluator.
class FormEvaluator {
 public:
  explicit FormEvaluator(const EvalForm& form);
  std::size_t dim() const { return ambient_dim_; }
  std::size_t scratch_size() const { return inner_.scratch_size() + 1; }
  double operator()(std::span<const double> x, std::span<double> scratch) const;

 private:
  EvalForm::Representation representation_;
  std::optional<std::vector<double>> direction_;
  std::size_t ambient_dim_;
  ExpansionEvaluator inner_;
};

/// Keeps the terms of total degree <= t.
HermiteExpansion truncate(const HermiteExpansion& e, std::uint64_t t);

/// Ornstein-Uhlenbeck operator T_rho in coefficient space: c_a -> rho^|a| c_a.
HermiteExpansion ou_apply(const HermiteExpansion& e, double rho);

double l2_norm(const HermiteExpansion& e);

HermiteExpansion operator+(const HermiteExpansion& a, const HermiteExpansion& b);
HermiteExpansion operator-(const HermiteExpansion& a, const HermiteExpansion& b);
HermiteExpansion operator*(double s, const HermiteExpansion& e);

/// Linearization h_a h_b = sum_k lambda_k h_{a+b-2k}; returns the map
/// from output degree a+b-2k to lambda_k.
std::map<std::uint32_t, double> linearize_pair(std::uint32_t a, std::uint32_t b);

/// Product of two expansions, tensorizing linearize_pair per coordinate.
HermiteExpansion multiply(const HermiteExpansion& a, const HermiteExpansion& b);

/// Expansion of x -> (1 + P(x))^2 / 4.
HermiteExpansion affine_square(const HermiteExpansion& p);

}  // namespace nnapprox
