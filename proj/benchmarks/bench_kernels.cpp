#include <benchmark/benchmark.h>

#include <random>

#include "schurlab/construct.hpp"
#include "schurlab/pipeline.hpp"
#include "schurlab/schur.hpp"
#include "schurlab/svd.hpp"
#include "schurlab/symnorm.hpp"

using namespace schurlab;

namespace {

ComplexMatrix gaussian(std::size_t n, bool real, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  ComplexMatrix x(n, n);
  for (auto& z : x.data()) z = real ? cplx{g(rng), 0.0} : cplx{g(rng), g(rng)};
  return x;
}

}  // namespace

static void BM_SingularValuesComplex(benchmark::State& state) {
  const auto x = gaussian(static_cast<std::size_t>(state.range(0)), false, 1);
  for (auto _ : state) benchmark::DoNotOptimize(jacobi_singular_values(x));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SingularValuesComplex)->RangeMultiplier(2)->Range(8, 256)->Complexity(benchmark::oNCubed);

static void BM_SingularValuesReal(benchmark::State& state) {
  const auto x = gaussian(static_cast<std::size_t>(state.range(0)), true, 2);
  for (auto _ : state) benchmark::DoNotOptimize(jacobi_singular_values(x));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SingularValuesReal)->RangeMultiplier(2)->Range(8, 256)->Complexity(benchmark::oNCubed);

static void BM_FullSvd(benchmark::State& state) {
  const auto x = gaussian(static_cast<std::size_t>(state.range(0)), false, 3);
  for (auto _ : state) benchmark::DoNotOptimize(jacobi_svd(x));
}
BENCHMARK(BM_FullSvd)->RangeMultiplier(4)->Range(8, 128);

// The commutator [B, A] is the largest dense matrix the pipeline decomposes.
static void BM_HilbertNorm(benchmark::State& state) {
  const auto c = commutator_BA(build_paper_matrices(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(singular_values(c)[0]);
}
BENCHMARK(BM_HilbertNorm)->Arg(32)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_NormE(benchmark::State& state) {
  const auto s = singular_values(gaussian(64, false, 4));
  const SymmetricNormSpec specs[] = {SymmetricNormSpec::schatten(3.0), SymmetricNormSpec::kyfan(8),
                                     SymmetricNormSpec::lorentz({1.0, 0.5, 0.25}),
                                     SymmetricNormSpec::orlicz(OrliczFunction::exp_minus_one())};
  const auto& spec = specs[state.range(0)];
  for (auto _ : state) benchmark::DoNotOptimize(norm_E(spec, s));
  state.SetLabel(spec.describe());
}
BENCHMARK(BM_NormE)->DenseRange(0, 3);

static void BM_SchurApply(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  PipelineConfig cfg;
  cfg.m_max = 16;
  const auto fn = theorem_functions(cfg);
  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = 0.9 * std::sin(static_cast<double>(i) + 0.5);
  const DiagonalOperator b(eig);
  const auto x = gaussian(n, false, 5);
  for (auto _ : state) benchmark::DoNotOptimize(schur_apply(fn.f, b, x));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SchurApply)->RangeMultiplier(2)->Range(16, 512)->Complexity(benchmark::oNSquared);

static void BM_TheoremStages(benchmark::State& state) {
  PipelineConfig cfg;
  cfg.m_max = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_theorem_main(cfg).passed());
}
BENCHMARK(BM_TheoremStages)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
