#include <doctest.h>

#include <stdexcept>
#include <tuple>

#include "llcsim/experiments.hpp"

using namespace llcsim;

namespace {

// Small workload sizes so grid searches stay cheap in unit tests.
DeskScale small_desk() {
  DeskScale d;
  d.vadd_n = 4096;
  d.gemm_m = d.gemm_n = d.gemm_k = 16;
  d.interference_capacity_factor = 1;
  return d;
}

}  // namespace

TEST_CASE("sweep rows share one baseline") {
  const CacheGeometry g;
  const TimingParams t;
  const std::vector<std::uint64_t> strides{8, 32, 128};
  const auto rows = sweep_stride(VaddSpec{4096}, strides, g, t, 1 << 15, 1024);
  REQUIRE(rows.size() == strides.size());
  const Cycle base = run_isolated(VaddSpec{4096}, g, t).total_cycles;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].param == strides[i]);  // rows keep the input order
    CHECK(rows[i].baseline_cycles == base);
    CHECK(rows[i].contended_cycles >= rows[i].baseline_cycles);
    CHECK(rows[i].slowdown ==
          static_cast<double>(rows[i].contended_cycles) /
              static_cast<double>(rows[i].baseline_cycles));
  }
}

TEST_CASE("a zero-byte reader leaves every row at exactly one") {
  const auto rows = sweep_stride(VaddSpec{2048}, {1, 32, 256}, CacheGeometry{},
                                 TimingParams{}, 0, 1024);
  for (const auto& row : rows) {
    CHECK(row.slowdown == 1.0);
    CHECK(row.contended_cycles == row.baseline_cycles);
  }
}

TEST_CASE("sweep input validation") {
  const CacheGeometry g;
  const TimingParams t;
  CHECK_THROWS_AS(sweep_stride(CopyLoopSpec{1, 1}, {32}, g, t, 1024, 1024),
                  std::invalid_argument);
  CHECK_THROWS_AS(sweep_stride(VaddSpec{64}, {}, g, t, 1024, 1024),
                  std::invalid_argument);
  CHECK_THROWS_AS(sweep_stride(VaddSpec{64}, {32, 0}, g, t, 1024, 1024),
                  std::invalid_argument);
  CHECK_THROWS_AS(sweep_copy_lines(InterferenceSpec{64, 1, 1, WarpModel{}},
                                   {1}, g, t),
                  std::invalid_argument);
  CHECK_THROWS_AS(sweep_copy_lines(VaddSpec{64}, {}, g, t),
                  std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      sweep_copy_lines(VaddSpec{64}, {g.num_lines + 1}, g, t),
      "cache_lines exceeds num_lines", std::invalid_argument);
}

TEST_CASE("copy sweep rows never dip below one") {
  const auto rows = sweep_copy_lines(VaddSpec{4096}, {0, 1, 64, 1024},
                                     CacheGeometry{}, TimingParams{});
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].slowdown == 1.0);  // zero lines copied: no interference
  for (const auto& row : rows) CHECK(row.slowdown >= 1.0);
}

TEST_CASE("calibration reproduces the point the targets came from") {
  const CacheGeometry g;
  const DeskScale desk = small_desk();
  const TimingParams truth;  // targets generated at the default timing
  const ScenarioSlowdowns sd = evaluate_scenarios(g, truth, desk);
  const std::vector<CalibrationTarget> targets{
      {Scenario::VaddPeak, sd.vadd_peak},
      {Scenario::VaddTail, sd.vadd_tail},
      {Scenario::GemmPeak, sd.gemm_peak},
      {Scenario::VaddCopyOne, sd.vadd_copy_one},
      {Scenario::VaddCopyFull, sd.vadd_copy_full}};

  const TimingGrid grid{{32}, {100, 200}, {4}, {1}};
  const CalibrationResult r = calibrate(targets, grid, g, desk);
  CHECK(r.params == truth);
  CHECK(r.residual == 0.0);
  CHECK(r.slowdowns.get(Scenario::VaddPeak) == sd.vadd_peak);
}

TEST_CASE("calibration matches a straightforward re-scan of the grid") {
  const CacheGeometry g;
  const DeskScale desk = small_desk();
  const auto targets = default_targets();
  const TimingGrid grid{{16, 32}, {100, 200}, {4}, {2}};

  const CalibrationResult r = calibrate(targets, grid, g, desk);

  bool found = false;
  double best_res = 0.0;
  TimingParams best_p;
  for (Cycle hit : grid.hit_cycles)
    for (Cycle latency : grid.latency_cycles) {
      const TimingParams p{hit, latency, 4, 2};
      const ScenarioSlowdowns sd = evaluate_scenarios(g, p, desk);
      double res = 0.0;
      for (const auto& target : targets) {
        const double rel =
            (sd.get(target.scenario) - target.ratio) / target.ratio;
        res += rel * rel;
      }
      const auto key = std::make_tuple(res, latency, hit);
      if (!found || key < std::make_tuple(best_res, best_p.dram_latency_cycles,
                                          best_p.llc_hit_cycles)) {
        best_res = res;
        best_p = p;
        found = true;
      }
    }
  CHECK(r.params == best_p);
  CHECK(r.residual == doctest::Approx(best_res).epsilon(1e-12));
}

TEST_CASE("calibration input validation") {
  const CacheGeometry g;
  const DeskScale desk = small_desk();
  const TimingGrid grid{{32}, {200}, {4}, {1}};
  CHECK_THROWS_AS(calibrate({}, grid, g, desk), std::invalid_argument);
  CHECK_THROWS_AS(calibrate({{Scenario::VaddPeak, 0.5}}, grid, g, desk),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      calibrate(default_targets(), TimingGrid{{}, {200}, {4}, {1}}, g, desk),
      std::invalid_argument);
  // Latency below the service interval at every grid point: nothing valid.
  CHECK_THROWS_AS(
      calibrate(default_targets(), TimingGrid{{32}, {2}, {4}, {1}}, g, desk),
      std::invalid_argument);
}

TEST_CASE("every default grid axis is used somewhere") {
  const TimingGrid grid = default_grid();
  CHECK(!grid.empty());
  CHECK(grid.hit_cycles.size() * grid.latency_cycles.size() *
            grid.service_interval_cycles.size() *
            grid.port_interval_cycles.size() >
        1);
}

TEST_CASE("default targets name each scenario once") {
  const auto targets = default_targets();
  REQUIRE(targets.size() == 5);
  for (const auto& target : targets) {
    CHECK(target.ratio >= 1.0);
    CHECK(scenario_name(target.scenario) != "unknown");
  }
}

TEST_CASE("line size inference needs a bracketing set") {
  CHECK_THROWS_AS(
      infer_line_size(VaddSpec{1024}, {16, 32}, CacheGeometry{},
                      TimingParams{}),
      std::invalid_argument);
}

TEST_CASE("line size inference recovers the default geometry") {
  CHECK(infer_line_size(VaddSpec{65536}, {8, 16, 32, 64, 128}, CacheGeometry{},
                        TimingParams{}) == 32);
}
