#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "llcsim/cache.hpp"
#include "llcsim/engine.hpp"
#include "llcsim/experiments.hpp"

using namespace llcsim;

static void BM_CacheAccess(benchmark::State& state) {
  const CacheGeometry g;
  CacheState cache(g);
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<Addr> dist(0, 2 * g.capacity_bytes() - 1);
  std::vector<Addr> addrs(1 << 16);
  for (Addr& a : addrs) a = dist(rng);

  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cache.access(addrs[i], TxKind::Read));
    i = (i + 1) % addrs.size();
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_CacheAccess);

static void BM_IsolatedVadd(benchmark::State& state) {
  const std::uint64_t n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(
        run_isolated(VaddSpec{n}, CacheGeometry{}, TimingParams{}));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_IsolatedVadd)->Arg(1 << 12)->Arg(1 << 16);

static void BM_ContendedSweepPoint(benchmark::State& state) {
  const CacheGeometry g;
  const DeskScale desk;
  const SimConfig config{
      g,
      TimingParams{},
      {StreamBinding{0, Requestor::Sm0, VaddSpec{desk.vadd_n}},
       StreamBinding{1, Requestor::Sm1,
                     InterferenceSpec{desk.interference_bytes(g),
                                      desk.peak_stride, 1,
                                      WarpModel{32, desk.threads}}}}};
  for (auto _ : state) benchmark::DoNotOptimize(run(config, 0));
}
BENCHMARK(BM_ContendedSweepPoint);

BENCHMARK_MAIN();
