#include "llcsim/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "llcsim/config.hpp"
#include "llcsim/csv.hpp"
#include "llcsim/engine.hpp"
#include "llcsim/experiments.hpp"
#include "llcsim/svg.hpp"

namespace llcsim {

namespace {

// Flag values are captured as raw key/value text and applied on top of the
// config file through the same RunConfig::apply_key path, so precedence is
// simply defaults, then file, then flags.
struct PendingFlags {
  std::optional<std::string> config_path;
  std::vector<std::pair<std::string, std::string>> kv;
};

struct FlagKey {
  const char* flag;
  const char* key;
  const char* help;
};

void register_flags(CLI::App* cmd, PendingFlags& flags,
                    std::initializer_list<FlagKey> keys) {
  if (!cmd->get_option_no_throw("--config"))
    cmd->add_option_function<std::string>(
        "--config",
        [&flags](const std::string& v) { flags.config_path = v; },
        "config file of key = value lines (default: $LLCSIM_CONFIG)");
  for (const FlagKey& fk : keys) {
    const char* key = fk.key;
    cmd->add_option_function<std::string>(
        fk.flag,
        [&flags, key](const std::string& v) { flags.kv.emplace_back(key, v); },
        fk.help);
  }
}

constexpr std::initializer_list<FlagKey> kModelFlags = {
    {"--line_size_bytes", "line_size_bytes", "cache line size in bytes"},
    {"--num_lines", "num_lines", "total cache lines"},
    {"--associativity", "associativity", "ways per set"},
    {"--llc_hit_cycles", "llc_hit_cycles", "LLC hit latency"},
    {"--dram_latency_cycles", "dram_latency_cycles", "DRAM access latency"},
    {"--dram_service_interval_cycles", "dram_service_interval_cycles",
     "cycles between DRAM transfers"},
    {"--llc_port_interval_cycles", "llc_port_interval_cycles",
     "cycles the LLC port is held per transaction"},
};

RunConfig resolve(const PendingFlags& flags) {
  RunConfig rc;
  std::optional<std::string> path = flags.config_path;
  if (!path) {
    if (const char* env = std::getenv("LLCSIM_CONFIG"); env && *env)
      path = env;
  }
  if (path) rc.merge_file(*path);
  for (const auto& [key, value] : flags.kv) rc.apply_key(key, value);
  rc.validate();
  return rc;
}

KernelSpec make_kernel(const RunConfig& rc) {
  const std::string& name = rc.kernel.value();
  if (name == "vadd") return VaddSpec{rc.n.value_or(65536)};
  if (name == "gemm")
    return GemmSpec{rc.m.value_or(64), rc.n.value_or(64), rc.k.value_or(64)};
  if (name == "interference") {
    const DeskScale desk;
    return InterferenceSpec{
        rc.n.value_or(desk.interference_bytes(rc.geometry)),
        rc.strides.empty() ? desk.peak_stride : rc.strides.front(),
        rc.runs.value_or(1),
        WarpModel{32, rc.threads.value_or(desk.threads)}};
  }
  if (name == "copy")
    return CopyLoopSpec{rc.cache_lines.empty() ? 1 : rc.cache_lines.front(),
                        rc.runs.value_or(1)};
  throw ConfigError("kernel", "unknown kernel '" + name + "'");
}

std::vector<SweepRow> with_baseline_row(std::vector<SweepRow> rows) {
  if (!rows.empty())
    rows.insert(rows.begin(), SweepRow{0, rows.front().baseline_cycles,
                                       rows.front().baseline_cycles, 1.0});
  return rows;
}

void write_rows(const std::vector<SweepRow>& rows, const RunConfig& rc,
                std::string_view title, std::string_view x_label,
                std::ostream& out) {
  const std::string format = rc.format.value_or("csv");
  if (!rc.out) {
    out << format_csv(rows);
    return;
  }
  const std::filesystem::path dest{*rc.out};
  if (format == "svg") {
    emit_svg(rows, dest, title, x_label);
    out << "wrote " << dest.string() << "\n";
    return;
  }
  emit_csv(rows, dest);
  out << "wrote " << dest.string() << "\n";
  if (format == "both") {
    std::filesystem::path svg_dest = dest;
    svg_dest.replace_extension(".svg");
    emit_svg(rows, svg_dest, title, x_label);
    out << "wrote " << svg_dest.string() << "\n";
  }
}

const char* kind_name(TxKind k) {
  switch (k) {
    case TxKind::Read: return "Read";
    case TxKind::Write: return "Write";
    case TxKind::Fill: return "Fill";
  }
  return "?";
}

const char* requestor_name(Requestor r) {
  switch (r) {
    case Requestor::Sm0: return "SM0";
    case Requestor::Sm1: return "SM1";
    case Requestor::CopyEngine: return "CopyEngine";
  }
  return "?";
}

void dump_trace_csv(const KernelSpec& kernel, const CacheGeometry& g,
                    const std::filesystem::path& dest) {
  BumpAllocator alloc(g.line_size_bytes);
  const Trace trace =
      build_stream_trace(kernel, g, {default_requestor(kernel), 0}, alloc);
  std::string text = "line_address,kind,requestor,stream\n";
  for (const Transaction& tx : trace.tx) {
    text += std::to_string(tx.line_addr);
    text += ',';
    text += kind_name(tx.kind);
    text += ',';
    text += requestor_name(tx.requestor);
    text += ',';
    text += std::to_string(tx.stream_id);
    text += '\n';
  }
  write_file_atomic(dest, text);
}

int do_run(const PendingFlags& flags,
           const std::optional<std::string>& dump_path, std::ostream& out) {
  RunConfig rc = resolve(flags);
  if (!rc.kernel)
    throw ConfigError("kernel", "kernel is required (pass --kernel)");
  const KernelSpec kernel = make_kernel(rc);
  validate_kernel(kernel, rc.geometry);
  if (dump_path) {
    dump_trace_csv(kernel, rc.geometry, *dump_path);
    out << "wrote " << *dump_path << "\n";
  }
  const SimResult res = run_isolated(kernel, rc.geometry, rc.timing);
  out << "kernel = " << *rc.kernel << "\n"
      << "total_cycles = " << res.total_cycles << "\n"
      << "transactions = " << res.transactions_issued << "\n"
      << "accesses = " << res.cache_stats.accesses << "\n"
      << "hits = " << res.cache_stats.hits << "\n"
      << "misses = " << res.cache_stats.misses << "\n"
      << "evictions = " << res.cache_stats.evictions << "\n";
  return 0;
}

int do_sweep_stride(const PendingFlags& flags, std::ostream& out) {
  RunConfig rc = resolve(flags);
  if (!rc.kernel) rc.kernel = "vadd";
  const KernelSpec kernel = make_kernel(rc);
  const std::vector<std::uint64_t> strides =
      rc.strides.empty()
          ? std::vector<std::uint64_t>{1, 2, 4, 8, 16, 32, 64, 128, 256}
          : rc.strides;
  const DeskScale desk;
  const std::uint64_t intf_n =
      rc.interference_n.value_or(desk.interference_bytes(rc.geometry));
  const auto rows = with_baseline_row(
      sweep_stride(kernel, strides, rc.geometry, rc.timing, intf_n,
                   rc.threads.value_or(desk.threads)));
  write_rows(rows, rc, "slowdown vs reader stride", "stride (bytes)", out);
  return 0;
}

int do_sweep_memcpy(const PendingFlags& flags, std::ostream& out) {
  RunConfig rc = resolve(flags);
  if (!rc.kernel) rc.kernel = "vadd";
  const KernelSpec kernel = make_kernel(rc);
  std::vector<std::uint64_t> lines = rc.cache_lines;
  if (lines.empty()) {
    for (const std::uint64_t v : {std::uint64_t{1}, std::uint64_t{16},
                                  std::uint64_t{256}, std::uint64_t{4096},
                                  std::uint64_t{rc.geometry.num_lines}})
      if (v <= rc.geometry.num_lines &&
          (lines.empty() || v > lines.back()))
        lines.push_back(v);
  }
  const auto rows = with_baseline_row(
      sweep_copy_lines(kernel, lines, rc.geometry, rc.timing));
  write_rows(rows, rc, "slowdown vs copied cache lines", "cache lines", out);
  return 0;
}

Scenario scenario_from_name(const std::string& name) {
  for (const Scenario s :
       {Scenario::VaddPeak, Scenario::VaddTail, Scenario::GemmPeak,
        Scenario::VaddCopyOne, Scenario::VaddCopyFull})
    if (scenario_name(s) == name) return s;
  throw ConfigError("target", "unknown calibration scenario '" + name + "'");
}

int do_calibrate(const PendingFlags& flags,
                 const std::vector<std::string>& target_args,
                 const PendingFlags& grid_flags, std::ostream& out) {
  RunConfig rc = resolve(flags);

  std::vector<CalibrationTarget> targets;
  for (const std::string& spec : target_args) {
    const std::size_t eq = spec.find('=');
    if (eq == std::string::npos)
      throw ConfigError("target",
                        "invalid --target '" + spec + "' (expected name=ratio)");
    const Scenario s = scenario_from_name(spec.substr(0, eq));
    char* end = nullptr;
    const double ratio = std::strtod(spec.c_str() + eq + 1, &end);
    if (end != spec.c_str() + spec.size())
      throw ConfigError("target",
                        "invalid --target '" + spec + "' (expected name=ratio)");
    targets.push_back({s, ratio});
  }
  if (targets.empty()) targets = default_targets();

  TimingGrid grid = default_grid();
  for (const auto& [key, value] : grid_flags.kv) {
    if (key == "grid_hit") grid.hit_cycles = parse_uint_list(key, value);
    if (key == "grid_latency") grid.latency_cycles = parse_uint_list(key, value);
    if (key == "grid_interval")
      grid.service_interval_cycles = parse_uint_list(key, value);
    if (key == "grid_port")
      grid.port_interval_cycles = parse_uint_list(key, value);
  }

  const DeskScale desk;
  const CalibrationResult res = calibrate(targets, grid, rc.geometry, desk);

  std::ostringstream snippet;
  snippet << "llc_hit_cycles = " << res.params.llc_hit_cycles << "\n"
          << "dram_latency_cycles = " << res.params.dram_latency_cycles << "\n"
          << "dram_service_interval_cycles = "
          << res.params.dram_service_interval_cycles << "\n"
          << "llc_port_interval_cycles = "
          << res.params.llc_port_interval_cycles << "\n";
  out << snippet.str();
  out << std::fixed << std::setprecision(4);
  out << "residual = " << res.residual << "\n";
  for (const CalibrationTarget& t : targets)
    out << scenario_name(t.scenario) << " = " << res.slowdowns.get(t.scenario)
        << " (target " << t.ratio << ")\n";
  out.unsetf(std::ios::fixed);

  if (rc.out) {
    write_file_atomic(std::filesystem::path{*rc.out}, snippet.str());
    out << "wrote " << *rc.out << "\n";
  }
  return 0;
}

int do_infer_line(const PendingFlags& flags, std::ostream& out) {
  RunConfig rc = resolve(flags);
  if (!rc.kernel) rc.kernel = "vadd";
  const KernelSpec kernel = make_kernel(rc);
  const std::vector<std::uint64_t> strides =
      rc.strides.empty() ? std::vector<std::uint64_t>{8, 16, 32, 64, 128}
                         : rc.strides;
  out << "inferred_line_size_bytes = "
      << infer_line_size(kernel, strides, rc.geometry, rc.timing) << "\n";
  return 0;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  CLI::App app{
      "trace-driven simulator of a shared last-level cache and DRAM channel "
      "contended by concurrent GPU-style streams"};
  app.name("llcsim");
  app.require_subcommand(1);

  int status = 0;

  PendingFlags run_flags;
  std::optional<std::string> dump_path;
  auto* run_cmd = app.add_subcommand(
      "run", "simulate one kernel in isolation and report statistics");
  register_flags(run_cmd, run_flags, kModelFlags);
  register_flags(run_cmd, run_flags,
                 {{"--kernel", "kernel", "vadd | gemm | interference | copy"},
                  {"--n", "n", "vadd elements, gemm n, or reader bytes"},
                  {"--m", "m", "gemm rows"},
                  {"--k", "k", "gemm inner dimension"},
                  {"--runs", "runs", "trace repetitions"},
                  {"--threads", "threads", "reader threads per block"},
                  {"--stride", "strides", "reader stride in bytes"},
                  {"--lines", "cache_lines", "lines per copy"}});
  run_cmd->add_option_function<std::string>(
      "--dump-trace",
      [&dump_path](const std::string& v) { dump_path = v; },
      "write the generated transaction trace as CSV");
  run_cmd->callback([&] { status = do_run(run_flags, dump_path, out); });

  PendingFlags ss_flags;
  auto* ss_cmd = app.add_subcommand(
      "sweep-stride",
      "slowdown of a compute kernel vs a strided reader, one row per stride");
  register_flags(ss_cmd, ss_flags, kModelFlags);
  register_flags(
      ss_cmd, ss_flags,
      {{"--kernel", "kernel", "vadd | gemm"},
       {"--n", "n", "measured kernel size"},
       {"--m", "m", "gemm rows"},
       {"--k", "k", "gemm inner dimension"},
       {"--strides", "strides", "comma-separated byte strides"},
       {"--threads", "threads", "reader threads per block"},
       {"--interference_n", "interference_n", "reader array bytes"},
       {"--out", "out", "output file"},
       {"--format", "format", "csv | svg | both"}});
  ss_cmd->callback([&] { status = do_sweep_stride(ss_flags, out); });

  PendingFlags sm_flags;
  auto* sm_cmd = app.add_subcommand(
      "sweep-memcpy",
      "slowdown of a compute kernel vs a copy loop, one row per line count");
  register_flags(sm_cmd, sm_flags, kModelFlags);
  register_flags(sm_cmd, sm_flags,
                 {{"--kernel", "kernel", "vadd | gemm"},
                  {"--n", "n", "measured kernel size"},
                  {"--m", "m", "gemm rows"},
                  {"--k", "k", "gemm inner dimension"},
                  {"--lines", "cache_lines", "comma-separated line counts"},
                  {"--out", "out", "output file"},
                  {"--format", "format", "csv | svg | both"}});
  sm_cmd->callback([&] { status = do_sweep_memcpy(sm_flags, out); });

  PendingFlags cal_flags, grid_flags;
  std::vector<std::string> target_args;
  auto* cal_cmd = app.add_subcommand(
      "calibrate",
      "grid-search timing parameters against target slowdown ratios");
  register_flags(cal_cmd, cal_flags, kModelFlags);
  register_flags(cal_cmd, cal_flags,
                 {{"--out", "out", "write best parameters as a config snippet"}});
  cal_cmd->add_option("--target", target_args,
                      "scenario=ratio (repeatable); default: published set");
  for (const FlagKey& fk :
       {FlagKey{"--grid_hit", "grid_hit", "hit latency candidates"},
        FlagKey{"--grid_latency", "grid_latency", "DRAM latency candidates"},
        FlagKey{"--grid_interval", "grid_interval",
                "DRAM service interval candidates"},
        FlagKey{"--grid_port", "grid_port", "port interval candidates"}}) {
    const char* key = fk.key;
    cal_cmd->add_option_function<std::string>(
        fk.flag,
        [&grid_flags, key](const std::string& v) {
          grid_flags.kv.emplace_back(key, v);
        },
        fk.help);
  }
  cal_cmd->callback(
      [&] { status = do_calibrate(cal_flags, target_args, grid_flags, out); });

  PendingFlags il_flags;
  auto* il_cmd = app.add_subcommand(
      "infer-line",
      "infer the cache line size from the stride-sweep slowdown peak");
  register_flags(il_cmd, il_flags, kModelFlags);
  register_flags(il_cmd, il_flags,
                 {{"--kernel", "kernel", "vadd | gemm"},
                  {"--n", "n", "measured kernel size"},
                  {"--strides", "strides", "comma-separated byte strides"},
                  {"--threads", "threads", "reader threads per block"}});
  il_cmd->callback([&] { status = do_infer_line(il_flags, out); });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return status;
}

int dispatch(const std::vector<std::string>& args) {
  return dispatch(args, std::cout, std::cerr);
}

}  // namespace llcsim
