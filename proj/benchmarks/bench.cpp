#include <benchmark/benchmark.h>

#include "entsym/haar.hpp"
#include "entsym/measures.hpp"
#include "entsym/state.hpp"
#include "entsym/symmetry.hpp"

using namespace entsym;

static void BM_SchmidtDecompose(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const PureState st = random_pure({d, d}, 1);
  const Bipartition bp = make_bipartition({d, d}, {0});
  for (auto _ : state) benchmark::DoNotOptimize(schmidt_decompose(st, bp));
}
BENCHMARK(BM_SchmidtDecompose)->Arg(2)->Arg(4)->Arg(8);

static void BM_HaarUnitary(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const HaarStream stream{7};
  std::uint64_t k = 0;
  for (auto _ : state) benchmark::DoNotOptimize(haar_unitary(d, stream, k++));
}
BENCHMARK(BM_HaarUnitary)->Arg(2)->Arg(4)->Arg(8);

static void BM_RelatedOperator(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const PureState st = random_pure({d, d}, 3);
  const SchmidtDecomposition sd = schmidt_decompose(st, make_bipartition({d, d}, {0}));
  const Matrix u = haar_unitary(d, HaarStream{11}, 0);
  for (auto _ : state) benchmark::DoNotOptimize(related_operator(u, sd));
}
BENCHMARK(BM_RelatedOperator)->Arg(2)->Arg(4)->Arg(8);

static void BM_MaxFidelityUnitary(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const PureState st = random_pure({d, d}, 5);
  const SchmidtDecomposition sd = schmidt_decompose(st, make_bipartition({d, d}, {0}));
  const Matrix u = haar_unitary(d, HaarStream{13}, 0);
  for (auto _ : state) benchmark::DoNotOptimize(max_fidelity_unitary(u, sd));
}
BENCHMARK(BM_MaxFidelityUnitary)->Arg(2)->Arg(4)->Arg(8);

static void BM_SymmetryOfEntanglement(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const SchmidtDecomposition sd =
      schmidt_decompose(fig2_state(0.3, d), make_bipartition({d, d}, {0}));
  for (auto _ : state)
    benchmark::DoNotOptimize(symmetry_of_entanglement(sd, 1000, 17));
}
BENCHMARK(BM_SymmetryOfEntanglement)->Arg(2)->Arg(4)->Arg(8);

BENCHMARK_MAIN();
