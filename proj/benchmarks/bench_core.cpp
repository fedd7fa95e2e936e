#include <benchmark/benchmark.h>

#include <vector>

#include "silt/chaos.hpp"
#include "silt/functionals.hpp"
#include "silt/marginals.hpp"
#include "silt/path.hpp"
#include "silt/sobolev.hpp"
#include "silt/specfun.hpp"

namespace {

void BM_SimplexMomentIntegral(benchmark::State& state) {
  double r = 0.2;
  for (auto _ : state) benchmark::DoNotOptimize(silt::specfun::simplex_moment_integral(0.5, 4, r));
}
BENCHMARK(BM_SimplexMomentIntegral);

void BM_HermiteNormalizedLog(benchmark::State& state) {
  std::vector<silt::SignedLog> out(static_cast<std::size_t>(state.range(0)) + 1);
  for (auto _ : state) {
    silt::specfun::hermite_normalized_log(3.7, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_HermiteNormalizedLog)->Arg(16)->Arg(200);

void BM_SamplePath(benchmark::State& state) {
  std::uint64_t stream = 0;
  for (auto _ : state) benchmark::DoNotOptimize(silt::sample_path(static_cast<std::size_t>(state.range(0)), 4, 1, stream++));
}
BENCHMARK(BM_SamplePath)->Arg(1024)->Arg(8192);

void BM_SiltEpsilon(benchmark::State& state) {
  const auto path = silt::sample_path(2048, 2, 1);
  const auto quad = silt::SimplexQuadrature::graded(static_cast<int>(state.range(0)), 8, 6);
  const std::vector<double> u{0.1, 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(silt::silt_epsilon(path, 1e-3, u, quad));
}
BENCHMARK(BM_SiltEpsilon)->Arg(12)->Arg(24);

void BM_ChaosTerm(benchmark::State& state) {
  const auto path = silt::sample_path(1024, 4, 1);
  const auto quad = silt::SimplexQuadrature::graded(40, 8, 6);
  const std::vector<double> u{0.05, 0.05, 0.05, 0.05};
  const silt::MultiIndex idx{{2, 1, 0, 3}};
  for (auto _ : state) benchmark::DoNotOptimize(silt::chaos_term_log(path, idx, u, quad));
}
BENCHMARK(BM_ChaosTerm);

void BM_MarginalDensity(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const silt::MarginalDensity density(n, 4);
  const auto points = silt::sample_mu_n(n, 4, 1, 64);
  const std::vector<double> u{0.3, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(density(u, points[i++ % points.size()]));
}
BENCHMARK(BM_MarginalDensity)->Arg(1)->Arg(4);

void BM_SobolevTerms(benchmark::State& state) {
  const std::vector<double> u{0.125, 0.0, 0.0, 0.0};
  silt::SobolevOptions opts;
  opts.workers = 1;
  for (auto _ : state) benchmark::DoNotOptimize(silt::sobolev_terms(u, static_cast<int>(state.range(0)), opts));
}
BENCHMARK(BM_SobolevTerms)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
