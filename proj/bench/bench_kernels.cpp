#include <benchmark/benchmark.h>

#include "kummer/kernels.hpp"
#include "kummer/kummer_tower.hpp"

using namespace kummer;
namespace k = kummer::kernels;

namespace {

// Top sequence of a sigma-model tower; |B| = 2^(2n+1).
ShortExactSequence fixture(std::size_t n) {
  return sigma_kummer_tower(SigmaModel::make(2, IntMatrix{{1, 0, 0}, {0, 1, 0}, {0, 0, 3}}), n).top();
}

k::Mode mode_of(const benchmark::State& state) { return state.range(1) ? k::Mode::parallel : k::Mode::serial; }

void BM_ElementwisePurity(benchmark::State& state) {
  const auto seq = fixture(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(k::elementwise_purity(seq, mode_of(state)));
  state.SetItemsProcessed(state.iterations() * seq.b().order().get_si());
}

void BM_SectionCheck(benchmark::State& state) {
  const auto seq = fixture(static_cast<std::size_t>(state.range(0)));
  const auto s = section_exists(seq)->map();
  for (auto _ : state) benchmark::DoNotOptimize(k::section_check(seq, s, mode_of(state)));
  state.SetItemsProcessed(state.iterations() * seq.c().order().get_si());
}

void BM_SubgroupCriterion(benchmark::State& state) {
  const auto seq = fixture(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(k::subgroup_criterion(seq, 4, mode_of(state)));
  state.SetItemsProcessed(state.iterations() * seq.b().order().get_si());
}

void args(benchmark::internal::Benchmark* b) {
  for (long n : {6, 8, 9})
    for (long par : {0, 1}) b->Args({n, par});
  b->ArgNames({"n", "parallel"});
}

}  // namespace

BENCHMARK(BM_ElementwisePurity)->Apply(args)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SectionCheck)->Apply(args)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SubgroupCriterion)->Apply(args)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
