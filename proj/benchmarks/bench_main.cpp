// Microbenchmarks for the hot paths: one full coordinate sweep, the lasso
// coordinate descent, and the two samplers.

#include <benchmark/benchmark.h>

#include "medfilter/baselines.hpp"
#include "medfilter/cmf.hpp"
#include "medfilter/simgen.hpp"

namespace mf = medfilter;

namespace {

mf::Matrix sampled(long n, long P, std::uint64_t seed) {
  mf::BlockParams bp;
  bp.n_true = std::min<long>(10, P);
  bp.n_A = P >= 40 ? 10 : 0;
  bp.n_B = P >= 40 ? 10 : 0;
  bp.n_I = P - bp.n_true - bp.n_A - bp.n_B;
  auto spec = mf::CovarianceSpec::block_highdim(bp);
  mf::RngStream rng(seed);
  return mf::mvn_sample(spec, n, rng);
}

void bench_cmf_start(benchmark::State& state) {
  const long n = 100, P = state.range(0);
  mf::Matrix d = sampled(n, P, 7);
  mf::Vector x = d.col(0), y = d.col(P + 1);
  mf::Matrix M = d.middleCols(1, P);
  x = mf::standardize(x);
  y = mf::standardize(y);
  M = mf::standardize(M);
  mf::DecisionSpec spec;
  for (auto _ : state) {
    mf::RngStream rng(11);
    mf::DecisionVector start(static_cast<std::size_t>(P), 0);
    for (auto& b : start) b = rng.bernoulli(0.1);
    auto r = mf::cmf_inner(x, M, y, spec, std::move(start), 25, P > 50, 3, rng);
    benchmark::DoNotOptimize(r.decvec.data());
  }
}
BENCHMARK(bench_cmf_start)->Arg(17)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void bench_lasso_cd(benchmark::State& state) {
  const long n = 200, P = state.range(0);
  mf::Matrix d = sampled(n, P, 13);
  mf::Matrix design(n, P + 1);
  design.col(0) = d.col(0);
  design.rightCols(P) = d.middleCols(1, P);
  design = mf::standardize(design);
  mf::Vector y = d.col(P + 1);
  y = y.array() - y.mean();
  std::vector<std::uint8_t> penalize(static_cast<std::size_t>(P + 1), 1);
  penalize[0] = 0;
  for (auto _ : state) {
    auto fit = mf::lasso_cd(design, y, 0.05, penalize);
    benchmark::DoNotOptimize(fit.coefficients.data());
  }
}
BENCHMARK(bench_lasso_cd)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void bench_exact_sample(benchmark::State& state) {
  mf::Matrix target = mf::cov2cor(mf::fixture_covariance(mf::FixtureName::NoiseAlpha));
  mf::RngStream rng(17);
  for (auto _ : state) {
    auto s = mf::exact_correlation_sample(target, 500, rng);
    benchmark::DoNotOptimize(s.data());
  }
}
BENCHMARK(bench_exact_sample)->Unit(benchmark::kMillisecond);

void bench_block_sample(benchmark::State& state) {
  auto spec = mf::CovarianceSpec::block_highdim(mf::BlockParams{});
  mf::RngStream rng(19);
  for (auto _ : state) {
    auto s = mf::mvn_sample(spec, 100, rng);
    benchmark::DoNotOptimize(s.data());
  }
}
BENCHMARK(bench_block_sample)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
