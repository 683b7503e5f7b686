#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "llcsim/cache.hpp"
#include "llcsim/engine.hpp"
#include "llcsim/timing.hpp"
#include "llcsim/trace.hpp"

namespace llcsim {

struct SweepRow {
  std::uint64_t param = 0;  // stride bytes or copied line count
  Cycle baseline_cycles = 0;
  Cycle contended_cycles = 0;
  double slowdown = 1.0;

  bool operator==(const SweepRow&) const = default;
};

enum class Scenario {
  VaddPeak,      // vadd vs strided reader at the line size
  VaddTail,      // vadd vs strided reader well past the line size
  GemmPeak,      // gemm vs strided reader at the line size
  VaddCopyOne,   // vadd vs one-line copy loop
  VaddCopyFull,  // vadd vs whole-cache copy loop
};
std::string scenario_name(Scenario s);

struct CalibrationTarget {
  Scenario scenario;
  double ratio;  // >= 1
};

// Published slowdown factors the timing parameters are fitted against.
std::vector<CalibrationTarget> default_targets();

// Fixed workload sizes for the calibration scenarios, recorded here so
// calibration runs are reproducible. Interference arrays scale with the
// geometry so the reader always overcommits the cache by the same factor.
struct DeskScale {
  std::uint64_t vadd_n = 65536;
  // Wide and shallow: short dot products keep whole operand panels resident
  // across waves, which is what gives gemm its partial immunity to readers.
  std::uint64_t gemm_m = 256, gemm_n = 256, gemm_k = 8;
  std::uint64_t interference_capacity_factor = 4;
  std::uint32_t threads = 1024;
  std::uint64_t peak_stride = 32;
  std::uint64_t tail_stride = 256;
  std::uint64_t copy_one_lines = 1;

  std::uint64_t interference_bytes(const CacheGeometry& g) const {
    return interference_capacity_factor * g.capacity_bytes();
  }
};

struct ScenarioSlowdowns {
  double vadd_peak = 1.0;
  double vadd_tail = 1.0;
  double gemm_peak = 1.0;
  double vadd_copy_one = 1.0;
  double vadd_copy_full = 1.0;

  double get(Scenario s) const;
};

ScenarioSlowdowns evaluate_scenarios(const CacheGeometry& g,
                                     const TimingParams& t,
                                     const DeskScale& desk);

struct TimingGrid {
  std::vector<Cycle> hit_cycles;
  std::vector<Cycle> latency_cycles;
  std::vector<Cycle> service_interval_cycles;
  std::vector<Cycle> port_interval_cycles;

  bool empty() const {
    return hit_cycles.empty() || latency_cycles.empty() ||
           service_interval_cycles.empty() || port_interval_cycles.empty();
  }
};
TimingGrid default_grid();

struct CalibrationResult {
  TimingParams params;
  double residual = 0.0;
  ScenarioSlowdowns slowdowns;  // at the returned params
};

// Exhaustive search minimizing the sum of squared relative errors over the
// targets. Ties go to the smallest dram_latency_cycles, then to the
// remaining parameters in declaration order.
CalibrationResult calibrate(const std::vector<CalibrationTarget>& targets,
                            const TimingGrid& grid, const CacheGeometry& g,
                            const DeskScale& desk);

// One row per stride: the kernel alone vs the kernel with a strided reader
// of `interference_n` bytes per array on the other SM.
std::vector<SweepRow> sweep_stride(const KernelSpec& kernel,
                                   const std::vector<std::uint64_t>& strides,
                                   const CacheGeometry& g,
                                   const TimingParams& t,
                                   std::uint64_t interference_n,
                                   std::uint32_t threads);

// One row per line count: the kernel alone vs the kernel with a copy loop
// of that many lines on the copy engine.
std::vector<SweepRow> sweep_copy_lines(const KernelSpec& kernel,
                                       const std::vector<std::uint64_t>& lines,
                                       const CacheGeometry& g,
                                       const TimingParams& t);

// Stride at the slowdown argmax (ties toward the smaller stride). Needs at
// least 3 strides; the caller supplies values bracketing the true size.
std::uint64_t infer_line_size(const KernelSpec& kernel,
                              const std::vector<std::uint64_t>& strides,
                              const CacheGeometry& g, const TimingParams& t);

}  // namespace llcsim
