#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "nnapprox/concept_sets.hpp"
#include "nnapprox/construction.hpp"
#include "nnapprox/sampling.hpp"

namespace {

using namespace nnapprox;

IntegrandFactory hermite_sum_integrand(std::size_t dim) {
  return [dim]() -> Integrand {
    return [dim](std::span<const double> x, std::span<double> out) {
      double acc = 0.0;
      for (std::size_t i = 0; i < dim; ++i) acc += x[i] * x[i] - 1.0;
      out[0] = acc / std::sqrt(2.0 * static_cast<double>(dim));
    };
  };
}

void run_moments(benchmark::State& state, Execution exec) {
  const SamplingPlan plan{static_cast<std::uint64_t>(state.range(0)), 7};
  for (auto _ : state) {
    auto m = gaussian_moments(plan, 8, 1, hermite_sum_integrand(8), exec);
    benchmark::DoNotOptimize(m);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_MomentsSerial(benchmark::State& state) { run_moments(state, Execution::serial); }
void BM_MomentsParallel(benchmark::State& state) { run_moments(state, Execution::parallel); }
BENCHMARK(BM_MomentsSerial)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_MomentsParallel)->Arg(1 << 16)->Arg(1 << 20);

void run_coefficients(benchmark::State& state, Execution exec) {
  const auto s = ConceptSet::ball({0.0, 0.0}, 1.0);
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    auto est = estimate_coeffs(s, 12, n, 11, kDefaultCoefficientCap, exec);
    benchmark::DoNotOptimize(est);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_CoeffsSerial(benchmark::State& state) { run_coefficients(state, Execution::serial); }
void BM_CoeffsParallel(benchmark::State& state) { run_coefficients(state, Execution::parallel); }
BENCHMARK(BM_CoeffsSerial)->Arg(1 << 16);
BENCHMARK(BM_CoeffsParallel)->Arg(1 << 16);

}  // namespace

BENCHMARK_MAIN();
