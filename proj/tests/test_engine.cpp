#include <doctest.h>

#include <stdexcept>

#include "llcsim/engine.hpp"

using namespace llcsim;

namespace {

SimConfig contended(const KernelSpec& measured, const KernelSpec& other) {
  SimConfig c;
  c.streams.push_back({0, Requestor::Sm0, measured});
  c.streams.push_back({1, default_requestor(other) == Requestor::CopyEngine
                              ? Requestor::CopyEngine
                              : Requestor::Sm1,
                       other});
  return c;
}

Cycle isolated_cycles(const KernelSpec& k) {
  return run_isolated(k, CacheGeometry{}, TimingParams{}).total_cycles;
}

}  // namespace

// Hand-computed completions at the default timing (hit 32, DRAM latency
// 200, service interval 4, port 1). Each case serves at most ten
// transactions, small enough to trace on paper.
TEST_CASE("single-transaction copy costs one DRAM round trip") {
  CHECK(isolated_cycles(CopyLoopSpec{1, 1}) == 200);
}

TEST_CASE("two-line copy burst is spaced by the service interval") {
  CHECK(isolated_cycles(CopyLoopSpec{2, 1}) == 204);
}

TEST_CASE("one-element gemm chains three cold misses") {
  CHECK(isolated_cycles(GemmSpec{1, 1, 1}) == 600);
}

TEST_CASE("two-element vadd chains three cold misses") {
  CHECK(isolated_cycles(VaddSpec{8}) == 600);
}

TEST_CASE("second pass over a resident buffer pays hit latency") {
  // Run 1 misses both lines (200, 400); run 2 hits them (432, 464).
  const InterferenceSpec k{32, 1, 2, WarpModel{32, 32}};
  CHECK(isolated_cycles(k) == 464);
}

TEST_CASE("dot-product reuse hits within a row") {
  // A and B each occupy one line: miss, miss, hit, hit, then the C miss.
  CHECK(isolated_cycles(GemmSpec{1, 1, 2}) == 664);
}

TEST_CASE("two-line vadd groups overlap on the channel") {
  // Each group's second miss lands on a busy channel: 204, 408, 612.
  CHECK(isolated_cycles(VaddSpec{16}) == 612);
}

TEST_CASE("strided read and write groups complete in order") {
  const InterferenceSpec k{64, 32, 1, WarpModel{32, 32}};
  CHECK(isolated_cycles(k) == 408);
}

TEST_CASE("copy engine interleaves into vadd idle slots") {
  // The copy fill slips into the DRAM gaps between vadd groups, so the
  // measured stream still finishes at its isolated completion.
  const SimResult r = run(contended(VaddSpec{8}, CopyLoopSpec{1, 1}), 0);
  CHECK(r.total_cycles == 600);
  CHECK(r.per_stream_cycles.at(0) == 600);
}

TEST_CASE("strided reader interleaves into vadd idle slots") {
  const InterferenceSpec other{64, 32, 1, WarpModel{32, 32}};
  const SimResult r = run(contended(VaddSpec{8}, other), 0);
  CHECK(r.total_cycles == 600);
}

TEST_CASE("empty measured trace completes at cycle zero") {
  const SimResult r = run_isolated(VaddSpec{0}, CacheGeometry{},
                                   TimingParams{});
  CHECK(r.total_cycles == 0);
  CHECK(r.transactions_issued == 0);
  CHECK(r.cache_stats == CacheStats{});
  CHECK(r.per_stream_cycles.at(0) == 0);
}

TEST_CASE("an interferer with no transactions changes nothing") {
  const KernelSpec measured = VaddSpec{4096};
  const Cycle alone = isolated_cycles(measured);
  for (const KernelSpec idle :
       {KernelSpec{InterferenceSpec{0, 32, 1, WarpModel{}}},
        KernelSpec{CopyLoopSpec{0, 1}}}) {
    const SimResult r = run(contended(measured, idle), 0);
    CHECK(r.total_cycles == alone);
    CHECK(slowdown(r, run_isolated(measured, CacheGeometry{},
                                   TimingParams{})) == 1.0);
  }
}

TEST_CASE("repeated runs are bit-identical") {
  const SimConfig c =
      contended(VaddSpec{8192}, InterferenceSpec{1 << 16, 32, 4, WarpModel{}});
  const SimResult a = run(c, 0);
  const SimResult b = run(c, 0);
  CHECK(a == b);
  CHECK(a.total_cycles > 0);
}

TEST_CASE("disjoint interference never speeds the measured stream up") {
  const KernelSpec kernels[] = {KernelSpec{VaddSpec{4096}},
                                KernelSpec{GemmSpec{8, 8, 8}}};
  const KernelSpec others[] = {
      KernelSpec{InterferenceSpec{1 << 15, 32, 2, WarpModel{}}},
      KernelSpec{InterferenceSpec{1 << 15, 256, 2, WarpModel{}}},
      KernelSpec{CopyLoopSpec{512, 1}}};
  for (const auto& k : kernels) {
    const SimResult base = run_isolated(k, CacheGeometry{}, TimingParams{});
    for (const auto& o : others) {
      const SimResult r = run(contended(k, o), 0);
      CHECK(slowdown(r, base) >= 1.0);
    }
  }
}

TEST_CASE("every issued transaction is one cache access") {
  const SimResult r =
      run(contended(VaddSpec{2048}, CopyLoopSpec{64, 1}), 0);
  CHECK(r.cache_stats.accesses == r.transactions_issued);
  CHECK(r.cache_stats.hits + r.cache_stats.misses == r.cache_stats.accesses);
}

TEST_CASE("measuring an unknown stream id is an error") {
  const SimConfig c = contended(VaddSpec{8}, CopyLoopSpec{1, 1});
  CHECK_THROWS_AS(run(c, 42), std::invalid_argument);
}

TEST_CASE("config validation rejects malformed stream sets") {
  SimConfig c;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);  // no streams

  c.streams = {{0, Requestor::Sm0, VaddSpec{8}},
               {0, Requestor::Sm1, VaddSpec{8}}};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);  // duplicate id

  c.streams = {{0, Requestor::Sm0, CopyLoopSpec{1, 1}}};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);  // copy on an SM

  c.streams = {{0, Requestor::CopyEngine, VaddSpec{8}}};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);  // compute on copy

  c.streams = {{0, Requestor::Sm0, VaddSpec{8}},
               {1, Requestor::Sm0, GemmSpec{1, 1, 1}}};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);  // SM double-booked

  c.streams = {{0, Requestor::Sm0, VaddSpec{8}},
               {1, Requestor::Sm1, GemmSpec{1, 1, 1}},
               {2, Requestor::CopyEngine, CopyLoopSpec{4, 1}}};
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("slowdown against an empty baseline is an error") {
  const SimResult base = run_isolated(VaddSpec{0}, CacheGeometry{},
                                      TimingParams{});
  const SimResult r = run_isolated(VaddSpec{8}, CacheGeometry{},
                                   TimingParams{});
  CHECK_THROWS_AS(slowdown(r, base), std::invalid_argument);
  CHECK(slowdown(r, r) == 1.0);
}

TEST_CASE("requestor placement does not change isolated timing") {
  const KernelSpec k = VaddSpec{1024};
  SimConfig on_sm1;
  on_sm1.streams = {{3, Requestor::Sm1, k}};
  CHECK(run(on_sm1, 3).total_cycles == isolated_cycles(k));
}
