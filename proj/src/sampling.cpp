#include "nnapprox/sampling.hpp"

#include <cmath>

#include "nnapprox/errors.hpp"

namespace nnapprox {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

void draw_gaussian(std::mt19937_64& rng, std::normal_distribution<double>& normal, std::span<double> x) {
  for (double& v : x) v = normal(rng);
}

void Moments::push(std::span<const double> values) {
  ++count;
  const double inv = 1.0 / static_cast<double>(count);
  for (std::size_t i = 0; i < mean.size(); ++i) {
    const double delta = values[i] - mean[i];
    mean[i] += delta * inv;
    m2[i] += delta * (values[i] - mean[i]);
  }
}

void Moments::merge(const Moments& other) {
  if (other.count == 0) return;
  if (count == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(count);
  const double nb = static_cast<double>(other.count);
  const double n = na + nb;
  for (std::size_t i = 0; i < mean.size(); ++i) {
    const double delta = other.mean[i] - mean[i];
    mean[i] += delta * (nb / n);
    m2[i] += other.m2[i] + delta * delta * (na * nb / n);
  }
  count += other.count;
}

double Moments::variance(std::size_t i) const {
  if (count < 2) return 0.0;
  return std::max(0.0, m2[i]) / static_cast<double>(count - 1);
}

double Moments::std_error(std::size_t i) const {
  if (count == 0) return 0.0;
  return std::sqrt(variance(i) / static_cast<double>(count));
}

namespace {

Moments run_stream(const SamplingPlan& plan, std::size_t k, std::size_t dim, std::size_t outputs,
                   const IntegrandFactory& factory) {
  Moments acc(outputs);
  const std::uint64_t n = plan.stream_samples(k);
  if (n == 0) return acc;
  std::mt19937_64 rng(derive_seed(plan.seed, k));
  std::normal_distribution<double> normal;
  Integrand integrand = factory();
  std::vector<double> x(dim), out(outputs);
  for (std::uint64_t j = 0; j < n; ++j) {
    draw_gaussian(rng, normal, x);
    integrand(x, out);
    acc.push(out);
  }
  return acc;
}

void validate(const SamplingPlan& plan) {
  if (plan.streams == 0) throw InvalidArgument("sampling plan needs at least one stream");
}

}  // namespace

Moments gaussian_moments_serial(const SamplingPlan& plan, std::size_t dim, std::size_t outputs,
                                const IntegrandFactory& factory) {
  validate(plan);
  Moments total(outputs);
  for (std::size_t k = 0; k < plan.streams; ++k) {
    total.merge(run_stream(plan, k, dim, outputs, factory));
  }
  return total;
}

Moments gaussian_moments_parallel(const SamplingPlan& plan, std::size_t dim, std::size_t outputs,
                                  const IntegrandFactory& factory) {
  validate(plan);
  std::vector<Moments> partial(plan.streams, Moments(outputs));
  const auto streams = static_cast<std::int64_t>(plan.streams);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t k = 0; k < streams; ++k) {
    partial[static_cast<std::size_t>(k)] = run_stream(plan, static_cast<std::size_t>(k), dim, outputs, factory);
  }
  // Merge in stream order so the result is independent of scheduling.
  Moments total(outputs);
  for (const auto& m : partial) total.merge(m);
  return total;
}

Moments gaussian_moments(const SamplingPlan& plan, std::size_t dim, std::size_t outputs,
                         const IntegrandFactory& factory, Execution exec) {
  return exec == Execution::serial ? gaussian_moments_serial(plan, dim, outputs, factory)
                                   : gaussian_moments_parallel(plan, dim, outputs, factory);
}

}  // namespace nnapprox
