#include "llcsim/experiments.hpp"

#include <stdexcept>
#include <tuple>
#include <variant>

namespace llcsim {

namespace {

bool is_compute(const KernelSpec& kernel) {
  return std::holds_alternative<VaddSpec>(kernel) ||
         std::holds_alternative<GemmSpec>(kernel);
}

SimResult run_contended(const KernelSpec& measured, const KernelSpec& interferer,
                        Requestor interferer_req, const CacheGeometry& g,
                        const TimingParams& t) {
  SimConfig config{g,
                   t,
                   {StreamBinding{0, Requestor::Sm0, measured},
                    StreamBinding{1, interferer_req, interferer}}};
  return run(config, 0);
}

}  // namespace

std::string scenario_name(Scenario s) {
  switch (s) {
    case Scenario::VaddPeak: return "vadd_peak";
    case Scenario::VaddTail: return "vadd_tail";
    case Scenario::GemmPeak: return "gemm_peak";
    case Scenario::VaddCopyOne: return "vadd_copy_one";
    case Scenario::VaddCopyFull: return "vadd_copy_full";
  }
  return "unknown";
}

std::vector<CalibrationTarget> default_targets() {
  return {{Scenario::VaddPeak, 6.0},
          {Scenario::VaddTail, 2.0},
          {Scenario::GemmPeak, 3.0},
          {Scenario::VaddCopyOne, 1.2},
          {Scenario::VaddCopyFull, 2.4}};
}

double ScenarioSlowdowns::get(Scenario s) const {
  switch (s) {
    case Scenario::VaddPeak: return vadd_peak;
    case Scenario::VaddTail: return vadd_tail;
    case Scenario::GemmPeak: return gemm_peak;
    case Scenario::VaddCopyOne: return vadd_copy_one;
    case Scenario::VaddCopyFull: return vadd_copy_full;
  }
  return 1.0;
}

ScenarioSlowdowns evaluate_scenarios(const CacheGeometry& g,
                                     const TimingParams& t,
                                     const DeskScale& desk) {
  const KernelSpec vadd = VaddSpec{desk.vadd_n};
  const KernelSpec gemm = GemmSpec{desk.gemm_m, desk.gemm_n, desk.gemm_k};
  const std::uint64_t intf_n = desk.interference_bytes(g);
  const WarpModel warp{32, desk.threads};

  const SimResult vadd_base = run_isolated(vadd, g, t);
  const SimResult gemm_base = run_isolated(gemm, g, t);

  const KernelSpec reader_peak =
      InterferenceSpec{intf_n, desk.peak_stride, 1, warp};
  const KernelSpec reader_tail =
      InterferenceSpec{intf_n, desk.tail_stride, 1, warp};
  const KernelSpec copy_one = CopyLoopSpec{desk.copy_one_lines, 1};
  const KernelSpec copy_full = CopyLoopSpec{g.num_lines, 1};

  ScenarioSlowdowns out;
  out.vadd_peak = slowdown(
      run_contended(vadd, reader_peak, Requestor::Sm1, g, t), vadd_base);
  out.vadd_tail = slowdown(
      run_contended(vadd, reader_tail, Requestor::Sm1, g, t), vadd_base);
  out.gemm_peak = slowdown(
      run_contended(gemm, reader_peak, Requestor::Sm1, g, t), gemm_base);
  out.vadd_copy_one = slowdown(
      run_contended(vadd, copy_one, Requestor::CopyEngine, g, t), vadd_base);
  out.vadd_copy_full = slowdown(
      run_contended(vadd, copy_full, Requestor::CopyEngine, g, t), vadd_base);
  return out;
}

TimingGrid default_grid() {
  return {{16, 32, 64}, {100, 200, 400}, {2, 3, 4, 6, 8}, {1, 2, 4}};
}

CalibrationResult calibrate(const std::vector<CalibrationTarget>& targets,
                            const TimingGrid& grid, const CacheGeometry& g,
                            const DeskScale& desk) {
  if (targets.empty())
    throw std::invalid_argument("calibration targets must be non-empty");
  for (const auto& target : targets)
    if (target.ratio < 1.0)
      throw std::invalid_argument("calibration targets must be at least 1");
  if (grid.empty())
    throw std::invalid_argument("calibration grid must be non-empty");

  auto key_of = [](double residual, const TimingParams& p) {
    return std::make_tuple(residual, p.dram_latency_cycles, p.llc_hit_cycles,
                           p.dram_service_interval_cycles,
                           p.llc_port_interval_cycles);
  };

  bool found = false;
  CalibrationResult best;
  for (Cycle hit : grid.hit_cycles)
    for (Cycle latency : grid.latency_cycles)
      for (Cycle interval : grid.service_interval_cycles)
        for (Cycle port : grid.port_interval_cycles) {
          const TimingParams p{hit, latency, interval, port};
          try {
            p.validate();
          } catch (const std::invalid_argument&) {
            continue;  // e.g. latency below the service interval
          }
          const ScenarioSlowdowns sd = evaluate_scenarios(g, p, desk);
          double residual = 0.0;
          for (const auto& target : targets) {
            const double rel =
                (sd.get(target.scenario) - target.ratio) / target.ratio;
            residual += rel * rel;
          }
          if (!found ||
              key_of(residual, p) < key_of(best.residual, best.params)) {
            best = {p, residual, sd};
            found = true;
          }
        }
  if (!found)
    throw std::invalid_argument("calibration grid has no valid timing point");
  return best;
}

std::vector<SweepRow> sweep_stride(const KernelSpec& kernel,
                                   const std::vector<std::uint64_t>& strides,
                                   const CacheGeometry& g,
                                   const TimingParams& t,
                                   std::uint64_t interference_n,
                                   std::uint32_t threads) {
  if (!is_compute(kernel))
    throw std::invalid_argument("sweep kernel must be vadd or gemm");
  if (strides.empty())
    throw std::invalid_argument("strides must be non-empty");
  for (const std::uint64_t s : strides)
    if (s == 0)
      throw std::invalid_argument("interference stride must be at least 1");

  const SimResult base = run_isolated(kernel, g, t);
  std::vector<SweepRow> rows;
  rows.reserve(strides.size());
  for (const std::uint64_t s : strides) {
    const KernelSpec reader =
        InterferenceSpec{interference_n, s, 1, WarpModel{32, threads}};
    const SimResult cont = run_contended(kernel, reader, Requestor::Sm1, g, t);
    rows.push_back(
        {s, base.total_cycles, cont.total_cycles, slowdown(cont, base)});
  }
  return rows;
}

std::vector<SweepRow> sweep_copy_lines(const KernelSpec& kernel,
                                       const std::vector<std::uint64_t>& lines,
                                       const CacheGeometry& g,
                                       const TimingParams& t) {
  if (!is_compute(kernel))
    throw std::invalid_argument("sweep kernel must be vadd or gemm");
  if (lines.empty())
    throw std::invalid_argument("line counts must be non-empty");
  for (const std::uint64_t count : lines)
    if (count > g.num_lines)
      throw std::invalid_argument("cache_lines exceeds num_lines");

  const SimResult base = run_isolated(kernel, g, t);
  std::vector<SweepRow> rows;
  rows.reserve(lines.size());
  for (const std::uint64_t count : lines) {
    const KernelSpec copy = CopyLoopSpec{count, 1};
    const SimResult cont =
        run_contended(kernel, copy, Requestor::CopyEngine, g, t);
    rows.push_back(
        {count, base.total_cycles, cont.total_cycles, slowdown(cont, base)});
  }
  return rows;
}

std::uint64_t infer_line_size(const KernelSpec& kernel,
                              const std::vector<std::uint64_t>& strides,
                              const CacheGeometry& g, const TimingParams& t) {
  if (strides.size() < 3)
    throw std::invalid_argument(
        "line size inference needs at least 3 strides");
  const DeskScale desk;
  const auto rows = sweep_stride(kernel, strides, g, t,
                                 desk.interference_bytes(g), desk.threads);
  std::size_t best = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const bool better = rows[i].slowdown > rows[best].slowdown ||
                        (rows[i].slowdown == rows[best].slowdown &&
                         rows[i].param < rows[best].param);
    if (better) best = i;
  }
  return rows[best].param;
}

}  // namespace llcsim
