#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

namespace nnapprox {

/// Seed of stream `stream` derived from a base seed (SplitMix64 finalizer
/// over seed + golden-ratio increments). Every random quantity in the
/// library is drawn from streams derived this way.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

inline constexpr std::size_t kDefaultStreams = 16;

/// `samples` standard Gaussian points split over a fixed number of streams;
/// stream k draws samples/streams points (+1 for k < samples % streams)
/// from std::mt19937_64(derive_seed(seed, k)). Results depend only on the
/// plan, never on the worker count.
struct SamplingPlan {
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::size_t streams = kDefaultStreams;

  std::uint64_t stream_samples(std::size_t k) const {
    return samples / streams + (k < samples % streams ? 1 : 0);
  }
};

enum class Execution { serial, parallel };

/// Running first and second moments for a vector of outputs
/// (Welford update, Chan merge).
struct Moments {
  std::uint64_t count = 0;
  std::vector<double> mean;
  std::vector<double> m2;

  explicit Moments(std::size_t outputs = 0) : mean(outputs, 0.0), m2(outputs, 0.0) {}

  std::size_t outputs() const { return mean.size(); }
  void push(std::span<const double> values);
  void merge(const Moments& other);
  /// Sample variance (n-1 denominator); 0 when count < 2.
  double variance(std::size_t i) const;
  double std_error(std::size_t i) const;
};

/// Integrand evaluated at one Gaussian sample; writes `outputs` values.
using Integrand = std::function<void(std::span<const double> x, std::span<double> out)>;
/// Builds one integrand per stream so integrands may own scratch space.
using IntegrandFactory = std::function<Integrand()>;

/// Monte Carlo moments of an integrand under gamma_dim. The parallel and
/// serial variants return bit-identical results for the same plan.
Moments gaussian_moments(const SamplingPlan& plan, std::size_t dim, std::size_t outputs,
                         const IntegrandFactory& factory, Execution exec = Execution::parallel);

Moments gaussian_moments_serial(const SamplingPlan& plan, std::size_t dim, std::size_t outputs,
                                const IntegrandFactory& factory);
Moments gaussian_moments_parallel(const SamplingPlan& plan, std::size_t dim, std::size_t outputs,
                                  const IntegrandFactory& factory);

/// Fills `x` with i.i.d. standard normals from `rng`.
void draw_gaussian(std::mt19937_64& rng, std::normal_distribution<double>& normal, std::span<double> x);

}  // namespace nnapprox
