#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "phimix/phimix.hpp"

using namespace phimix;

static void BM_StrictlyStable(benchmark::State& state) {
  const StableExponent e(1.0, static_cast<double>(state.range(0)) / 10.0, 0.0);
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(sample_strictly_stable(e, rng));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_StrictlyStable)->Arg(5)->Arg(10)->Arg(15)->Arg(20);

static void BM_MixtureId(benchmark::State& state) {
  const StableExponent e(1.0, 1.5, 0.0);
  const auto z = MixingLaw::gamma(2.0);
  Rng rng(2);
  for (auto _ : state) benchmark::DoNotOptimize(sample_mixture_id(z, e, rng));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_MixtureId);

// Counting draw at theta = 10^-k.
static void BM_PgfSample(benchmark::State& state) {
  const PgfFamily f(MixingLaw::gamma(2.0), 1, 2, std::pow(10.0, -static_cast<double>(state.range(0))));
  Rng rng(3);
  for (auto _ : state) benchmark::DoNotOptimize(f.sample(rng));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_PgfSample)->DenseRange(1, 3);

// One normalized geometric sum of Cauchy steps; cost grows like 1/theta.
static void BM_RandomSum(benchmark::State& state) {
  const double theta = std::pow(10.0, -static_cast<double>(state.range(0)));
  const PgfFamily f(MixingLaw::exponential(), 0, 1, theta);
  const StableExponent cauchy(1.0, 1.0, 0.0);
  const ScalarSampler inc = [&](Rng& r) { return sample_strictly_stable(cauchy, r); };
  const auto norming = attraction_norming(1.0, theta);
  Rng rng(4);
  for (auto _ : state) benchmark::DoNotOptimize(random_sum_sample(f, inc, norming, rng));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_RandomSum)->DenseRange(1, 3);

static void BM_EmpiricalCf(benchmark::State& state) {
  const auto sample = draw_scalars(McPlan{static_cast<std::size_t>(state.range(0)), 5},
                                   [](Rng& rng) { return rng.exponential(); });
  const auto grid = default_cf_grid();
  for (auto _ : state) {
    for (double t : grid) benchmark::DoNotOptimize(empirical_cf(sample, t));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * static_cast<std::int64_t>(grid.size()));
}
BENCHMARK(BM_EmpiricalCf)->Arg(10000)->Arg(100000);

static void BM_KsDistance(benchmark::State& state) {
  const auto sample = draw_scalars(McPlan{static_cast<std::size_t>(state.range(0)), 6},
                                   [](Rng& rng) { return rng.exponential(); });
  const CdfFunction cdf = [](double x) { return x <= 0.0 ? 0.0 : -std::expm1(-x); };
  for (auto _ : state) benchmark::DoNotOptimize(ks_distance(sample, cdf));
}
BENCHMARK(BM_KsDistance)->Arg(100000);

static void BM_ToeplitzPsd(benchmark::State& state) {
  const auto grid = linear_grid(-5.0, 5.0, static_cast<std::size_t>(state.range(0)));
  const LinnikParams p{1.0, 1.5, 0.0, 1.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(psd_toeplitz_check([&](double t) { return linnik_cf(p, t); }, grid));
  }
}
BENCHMARK(BM_ToeplitzPsd)->Arg(41)->Arg(64);

// Monte-Carlo throughput with a worker pool; output is identical for any count.
static void BM_DrawScalarsWorkers(benchmark::State& state) {
  const StableExponent e(1.0, 1.5, 0.0);
  const auto z = MixingLaw::gamma(1.0);
  for (auto _ : state) {
    const McPlan plan{100000, 7, static_cast<unsigned>(state.range(0)), 4096};
    benchmark::DoNotOptimize(draw_scalars(plan, [&](Rng& rng) { return sample_mixture_id(z, e, rng); }));
  }
  state.SetItemsProcessed(state.iterations() * 100000);
}
BENCHMARK(BM_DrawScalarsWorkers)->Arg(1)->Arg(4)->UseRealTime();
BENCHMARK_MAIN();
