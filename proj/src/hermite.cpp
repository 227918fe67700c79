#include "nnapprox/hermite.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "nnapprox/errors.hpp"

namespace nnapprox {
namespace {

// Recurrence coefficients h_{k+1} = x*a_k*h_k - b_k*h_{k-1},
// a_k = 1/sqrt(k+1), b_k = sqrt(k/(k+1)).
struct RecurrenceTable {
  static constexpr std::size_t kSize = 8192;
  std::vector<double> a, b;
  RecurrenceTable() : a(kSize), b(kSize) {
    for (std::size_t k = 0; k < kSize; ++k) {
      a[k] = 1.0 / std::sqrt(static_cast<double>(k + 1));
      b[k] = std::sqrt(static_cast<double>(k) / static_cast<double>(k + 1));
    }
  }
};

const RecurrenceTable& recurrence() {
  static const RecurrenceTable table;
  return table;
}

inline double rec_a(std::size_t k) {
  return k < RecurrenceTable::kSize ? recurrence().a[k] : 1.0 / std::sqrt(static_cast<double>(k + 1));
}
inline double rec_b(std::size_t k) {
  return k < RecurrenceTable::kSize ? recurrence().b[k]
                                    : std::sqrt(static_cast<double>(k) / static_cast<double>(k + 1));
}

// Calls emit(a + b - 2k, lambda_k) for k = 0..min(a,b).
template <class Emit>
void for_each_linearization(std::uint32_t a, std::uint32_t b, Emit&& emit) {
  const std::uint32_t kmax = std::min(a, b);
  const double n = static_cast<double>(a) + static_cast<double>(b);
  // log lambda_0 = log sqrt(C(a+b, a))
  const std::uint32_t hi = std::max(a, b);
  double log_lambda = 0.0;
  for (std::uint32_t i = 1; i <= kmax; ++i) {
    log_lambda += std::log(static_cast<double>(hi + i) / static_cast<double>(i));
  }
  log_lambda *= 0.5;
  emit(a + b, std::exp(log_lambda));
  for (std::uint32_t k = 1; k <= kmax; ++k) {
    const double num = static_cast<double>(a - k + 1) * static_cast<double>(b - k + 1);
    const double m = n - 2.0 * k;  // output degree
    log_lambda += std::log(num / k) - 0.5 * std::log((m + 2.0) * (m + 1.0));
    emit(a + b - 2 * k, std::exp(log_lambda));
  }
}

}  // namespace

void hermite_table(double x, std::span<double> out) {
  if (out.empty()) return;
  out[0] = 1.0;
  if (out.size() == 1) return;
  out[1] = x;
  for (std::size_t k = 1; k + 1 < out.size(); ++k) {
    out[k + 1] = x * rec_a(k) * out[k] - rec_b(k) * out[k - 1];
  }
}

double hermite_eval(unsigned n, double x) {
  if (n == 0) return 1.0;
  double prev = 1.0, cur = x;
  for (unsigned k = 1; k < n; ++k) {
    const double next = (x * cur - std::sqrt(static_cast<double>(k)) * prev) /
                        std::sqrt(static_cast<double>(k + 1));
    prev = cur;
    cur = next;
  }
  return cur;
}

// ---------------------------------------------------------------------------
// MultiIndex

MultiIndex::MultiIndex(std::vector<std::uint32_t> exponents) : exponents_(std::move(exponents)) {
  for (auto e : exponents_) total_degree_ += e;
}

MultiIndex MultiIndex::unit(std::size_t dim, std::size_t coord, std::uint32_t degree) {
  std::vector<std::uint32_t> e(dim, 0);
  e.at(coord) = degree;
  return MultiIndex(std::move(e));
}

std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b) {
  if (auto c = a.total_degree_ <=> b.total_degree_; c != 0) return c;
  if (auto c = a.exponents_.size() <=> b.exponents_.size(); c != 0) return c;
  // Higher exponent in the first coordinate sorts first within a degree.
  for (std::size_t i = 0; i < a.exponents_.size(); ++i) {
    if (a.exponents_[i] != b.exponents_[i]) return b.exponents_[i] <=> a.exponents_[i];
  }
  return std::strong_ordering::equal;
}

std::uint64_t count_multi_indices(std::uint64_t t, std::size_t d) {
  // C(t+d, d) built incrementally; each partial product is itself a binomial.
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  unsigned __int128 c = 1;
  for (std::size_t i = 1; i <= d; ++i) {
    c = c * (t + i) / i;
    if (c > kMax) return kMax;
  }
  return static_cast<std::uint64_t>(c);
}

std::vector<MultiIndex> enumerate_multi_indices(std::size_t d, std::uint32_t t) {
  std::vector<MultiIndex> out;
  std::vector<std::uint32_t> e(d, 0);
  // Compositions of each total degree s into d parts, first coordinate descending.
  for (std::uint32_t s = 0; s <= t; ++s) {
    auto rec = [&](auto&& self, std::size_t i, std::uint32_t left) -> void {
      if (i + 1 == d) {
        e[i] = left;
        out.emplace_back(e);
        return;
      }
      for (std::uint32_t v = left + 1; v-- > 0;) {
        e[i] = v;
        self(self, i + 1, left - v);
      }
    };
    if (d == 0) break;
    rec(rec, 0, s);
  }
  return out;
}

// ---------------------------------------------------------------------------
// HermiteExpansion

HermiteExpansion::HermiteExpansion(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw InvalidArgument("expansion dimension must be positive");
}

HermiteExpansion::HermiteExpansion(std::size_t dim, Terms terms) : HermiteExpansion(dim) {
  for (auto& [alpha, c] : terms) {
    if (alpha.size() != dim_) throw DimensionMismatch(dim_, alpha.size());
    if (c != 0.0) terms_.emplace(alpha, c);
  }
}

HermiteExpansion HermiteExpansion::constant(std::size_t dim, double c) {
  HermiteExpansion e(dim);
  e.add(MultiIndex::zero(dim), c);
  return e;
}

HermiteExpansion HermiteExpansion::from_dense_1d(std::span<const double> coeffs) {
  HermiteExpansion e(1);
  for (std::size_t n = 0; n < coeffs.size(); ++n) {
    if (coeffs[n] != 0.0) e.terms_.emplace_hint(e.terms_.end(), MultiIndex({static_cast<std::uint32_t>(n)}), coeffs[n]);
  }
  return e;
}

std::uint64_t HermiteExpansion::degree() const {
  return terms_.empty() ? 0 : terms_.rbegin()->first.total_degree();
}

double HermiteExpansion::coefficient(const MultiIndex& alpha) const {
  auto it = terms_.find(alpha);
  return it == terms_.end() ? 0.0 : it->second;
}

void HermiteExpansion::add(const MultiIndex& alpha, double c) {
  if (alpha.size() != dim_) throw DimensionMismatch(dim_, alpha.size());
  if (c == 0.0) return;
  auto [it, inserted] = terms_.emplace(alpha, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

std::vector<double> HermiteExpansion::dense_1d() const {
  if (dim_ != 1) throw DimensionMismatch(1, dim_);
  std::vector<double> out(empty() ? 0 : degree() + 1, 0.0);
  for (const auto& [alpha, c] : terms_) out[alpha[0]] = c;
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation

ExpansionEvaluator::ExpansionEvaluator(const HermiteExpansion& e) : dim_(e.dim()) {
  if (dim_ == 1) {
    dense_1d_ = true;
    coeffs_ = e.dense_1d();
    table_size_ = 0;
    return;
  }
  max_degree_.assign(dim_, 0);
  coeffs_.reserve(e.size());
  exponents_.reserve(e.size() * dim_);
  for (const auto& [alpha, c] : e.terms()) {
    coeffs_.push_back(c);
    for (std::size_t i = 0; i < dim_; ++i) {
      exponents_.push_back(alpha[i]);
      max_degree_[i] = std::max(max_degree_[i], alpha[i]);
    }
  }
  offsets_.resize(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    offsets_[i] = table_size_;
    table_size_ += max_degree_[i] + 1;
  }
}

double ExpansionEvaluator::operator()(std::span<const double> x, std::span<double> scratch) const {
  if (x.size() != dim_) throw DimensionMismatch(dim_, x.size());
  if (dense_1d_) {
    const std::size_t n = coeffs_.size();
    if (n == 0) return 0.0;
    const double u = x[0];
    double sum = coeffs_[0];
    if (n == 1) return sum;
    double prev = 1.0, cur = u;
    sum += coeffs_[1] * cur;
    for (std::size_t k = 1; k + 1 < n; ++k) {
      const double next = u * rec_a(k) * cur - rec_b(k) * prev;
      prev = cur;
      cur = next;
      sum += coeffs_[k + 1] * cur;
    }
    return sum;
  }
  if (coeffs_.empty()) return 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    hermite_table(x[i], scratch.subspan(offsets_[i], max_degree_[i] + 1));
  }
  double sum = 0.0;
  const std::uint32_t* row = exponents_.data();
  for (double c : coeffs_) {
    double prod = c;
    for (std::size_t i = 0; i < dim_; ++i) prod *= scratch[offsets_[i] + row[i]];
    sum += prod;
    row += dim_;
  }
  return sum;
}

double expansion_eval(const HermiteExpansion& e, std::span<const double> x) {
  ExpansionEvaluator ev(e);
  std::vector<double> scratch(ev.scratch_size());
  return ev(x, scratch);
}

FormEvaluator::FormEvaluator(const EvalForm& form)
    : representation_(form.representation),
      direction_(form.direction),
      ambient_dim_(form.ambient_dim()),
      inner_(form.poly) {
  if (direction_ && form.poly.dim() != 1) {
    throw InvalidArgument("projected forms must carry a one-dimensional expansion");
  }
}

double FormEvaluator::operator()(std::span<const double> x, std::span<double> scratch) const {
  if (x.size() != ambient_dim_) throw DimensionMismatch(ambient_dim_, x.size());
  double value;
  if (direction_) {
    double u = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) u += (*direction_)[i] * x[i];
    value = inner_(std::span<const double>(&u, 1), scratch);
  } else {
    value = inner_(x, scratch);
  }
  if (representation_ == EvalForm::Representation::squared_affine) {
    const double s = 1.0 + value;
    return 0.25 * (s * s);
  }
  return value;
}

double expansion_eval(const EvalForm& form, std::span<const double> x) {
  FormEvaluator ev(form);
  std::vector<double> scratch(ev.scratch_size());
  return ev(x, scratch);
}

// ---------------------------------------------------------------------------
// Coefficient-space operators

HermiteExpansion truncate(const HermiteExpansion& e, std::uint64_t t) {
  HermiteExpansion out(e.dim());
  for (const auto& [alpha, c] : e.terms()) {
    if (alpha.total_degree() > t) break;  // graded order
    out.add(alpha, c);
  }
  return out;
}

HermiteExpansion ou_apply(const HermiteExpansion& e, double rho) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw InvalidArgument("rho must lie in [0, 1]");
  HermiteExpansion out(e.dim());
  for (const auto& [alpha, c] : e.terms()) {
    const std::uint64_t k = alpha.total_degree();
    const double scale = k == 0 ? 1.0 : std::pow(rho, static_cast<double>(k));
    out.add(alpha, c * scale);
  }
  return out;
}

double l2_norm(const HermiteExpansion& e) {
  double s = 0.0;
  for (const auto& [alpha, c] : e.terms()) s += c * c;
  return std::sqrt(s);
}

HermiteExpansion operator+(const HermiteExpansion& a, const HermiteExpansion& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch(a.dim(), b.dim());
  HermiteExpansion out = a;
  for (const auto& [alpha, c] : b.terms()) out.add(alpha, c);
  return out;
}

HermiteExpansion operator-(const HermiteExpansion& a, const HermiteExpansion& b) {
  return a + (-1.0) * b;
}

HermiteExpansion operator*(double s, const HermiteExpansion& e) {
  HermiteExpansion out(e.dim());
  for (const auto& [alpha, c] : e.terms()) out.add(alpha, s * c);
  return out;
}

std::map<std::uint32_t, double> linearize_pair(std::uint32_t a, std::uint32_t b) {
  std::map<std::uint32_t, double> out;
  for_each_linearization(a, b, [&](std::uint32_t deg, double lambda) { out[deg] = lambda; });
  return out;
}

namespace {

HermiteExpansion multiply_1d(const HermiteExpansion& a, const HermiteExpansion& b) {
  const auto da = a.dense_1d();
  const auto db = b.dense_1d();
  if (da.empty() || db.empty()) return HermiteExpansion(1);
  std::vector<double> acc(da.size() + db.size() - 1, 0.0);
  for (std::size_t i = 0; i < da.size(); ++i) {
    if (da[i] == 0.0) continue;
    for (std::size_t j = 0; j < db.size(); ++j) {
      if (db[j] == 0.0) continue;
      const double cij = da[i] * db[j];
      for_each_linearization(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j),
                             [&](std::uint32_t deg, double lambda) { acc[deg] += cij * lambda; });
    }
  }
  return HermiteExpansion::from_dense_1d(acc);
}

}  // namespace

HermiteExpansion multiply(const HermiteExpansion& a, const HermiteExpansion& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch(a.dim(), b.dim());
  if (a.dim() == 1) return multiply_1d(a, b);

  const std::size_t d = a.dim();
  HermiteExpansion::Terms acc;
  std::vector<std::vector<std::pair<std::uint32_t, double>>> factors(d);
  std::vector<std::uint32_t> gamma(d);
  for (const auto& [alpha, ca] : a.terms()) {
    for (const auto& [beta, cb] : b.terms()) {
      for (std::size_t i = 0; i < d; ++i) {
        factors[i].clear();
        for_each_linearization(alpha[i], beta[i], [&](std::uint32_t deg, double lambda) {
          factors[i].emplace_back(deg, lambda);
        });
      }
      // Tensor product of per-coordinate linearizations.
      auto rec = [&](auto&& self, std::size_t i, double weight) -> void {
        if (i == d) {
          acc[MultiIndex(gamma)] += weight;
          return;
        }
        for (const auto& [deg, lambda] : factors[i]) {
          gamma[i] = deg;
          self(self, i + 1, weight * lambda);
        }
      };
      rec(rec, 0, ca * cb);
    }
  }
  return HermiteExpansion(d, std::move(acc));
}

HermiteExpansion affine_square(const HermiteExpansion& p) {
  // (1 + P)^2 / 4 = (1 + 2P + P^2) / 4
  HermiteExpansion one_plus = HermiteExpansion::constant(p.dim(), 1.0) + p;
  return 0.25 * multiply(one_plus, one_plus);
}

}  // namespace nnapprox
