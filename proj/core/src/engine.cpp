#include "llcsim/engine.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace llcsim {

Requestor default_requestor(const KernelSpec& kernel) {
  return std::holds_alternative<CopyLoopSpec>(kernel) ? Requestor::CopyEngine
                                                      : Requestor::Sm0;
}

void SimConfig::validate() const {
  geometry.validate();
  timing.validate();
  if (streams.empty())
    throw std::invalid_argument("at least one stream is required");

  std::set<int> ids;
  int sm_kernels[2] = {0, 0};
  for (const auto& s : streams) {
    if (!ids.insert(s.stream_id).second)
      throw std::invalid_argument("duplicate stream id");
    const bool is_copy = std::holds_alternative<CopyLoopSpec>(s.kernel);
    const bool on_copy_engine = s.requestor == Requestor::CopyEngine;
    if (is_copy && !on_copy_engine)
      throw std::invalid_argument("copy loops must run on the copy engine");
    if (!is_copy && on_copy_engine)
      throw std::invalid_argument(
          "compute kernels cannot run on the copy engine");
    if (s.requestor == Requestor::Sm0 && ++sm_kernels[0] > 1)
      throw std::invalid_argument("at most one compute kernel per SM");
    if (s.requestor == Requestor::Sm1 && ++sm_kernels[1] > 1)
      throw std::invalid_argument("at most one compute kernel per SM");
    validate_kernel(s.kernel, geometry);
  }
}

SimResult run(const SimConfig& config, int measured_stream) {
  config.validate();

  std::size_t measured = config.streams.size();
  for (std::size_t i = 0; i < config.streams.size(); ++i)
    if (config.streams[i].stream_id == measured_stream) measured = i;
  if (measured == config.streams.size())
    throw std::invalid_argument("unknown stream id");

  BumpAllocator alloc(config.geometry.line_size_bytes);
  std::vector<Trace> traces;
  traces.reserve(config.streams.size());
  for (const auto& s : config.streams)
    traces.push_back(build_stream_trace(s.kernel, config.geometry,
                                        {s.requestor, s.stream_id}, alloc));

  SimResult result;
  for (const auto& s : config.streams)
    result.per_stream_cycles[s.stream_id] = 0;
  if (traces[measured].empty()) return result;  // empty measurement window

  struct Cursor {
    std::size_t group = 0;
    std::size_t tx_pos = 0;
    Cycle next_issue = 0;
    Cycle last_completion = 0;
    bool active = false;
  };
  std::vector<Cursor> cur(config.streams.size());
  for (std::size_t i = 0; i < cur.size(); ++i) cur[i].active = !traces[i].empty();

  CacheState cache(config.geometry);
  ChannelState channel;
  // Groups are serviced in issue-time order; the rotating cursor makes
  // equal issue times strictly round-robin.
  std::size_t rr = 0;

  for (;;) {
    std::size_t pick = cur.size();
    for (std::size_t off = 0; off < cur.size(); ++off) {
      const std::size_t i = (rr + off) % cur.size();
      if (!cur[i].active) continue;
      if (pick == cur.size() || cur[i].next_issue < cur[pick].next_issue)
        pick = i;
    }

    Cursor& c = cur[pick];
    const Trace& trace = traces[pick];
    const Cycle issue = c.next_issue;
    const std::uint32_t len = trace.group_len[c.group];
    Cycle group_completion = issue;
    for (std::uint32_t k = 0; k < len; ++k) {
      const Transaction& tx = trace.tx[c.tx_pos + k];
      const AccessOutcome out = cache.access(tx.line_addr, tx.kind);
      const Cycle done =
          service_transaction(channel, config.timing, out.hit, tx.kind, issue);
      group_completion = std::max(group_completion, done);
    }
    result.transactions_issued += len;
    c.tx_pos += len;
    c.group++;
    c.next_issue = group_completion;
    c.last_completion = group_completion;
    rr = (pick + 1) % cur.size();

    if (c.group == trace.group_len.size()) {
      if (pick == measured) break;  // measured stream runs its trace once
      c.group = 0;                  // interferers replay until then
      c.tx_pos = 0;
    }
  }

  for (std::size_t i = 0; i < cur.size(); ++i)
    result.per_stream_cycles[config.streams[i].stream_id] =
        cur[i].last_completion;
  result.total_cycles = cur[measured].last_completion;
  result.cache_stats = cache.stats();
  return result;
}

SimResult run_isolated(const KernelSpec& kernel, const CacheGeometry& g,
                       const TimingParams& t) {
  SimConfig config{g, t, {StreamBinding{0, default_requestor(kernel), kernel}}};
  return run(config, 0);
}

double slowdown(const SimResult& contended, const SimResult& baseline) {
  if (baseline.total_cycles == 0)
    throw std::invalid_argument("baseline run has zero cycles");
  return static_cast<double>(contended.total_cycles) /
         static_cast<double>(baseline.total_cycles);
}

}  // namespace llcsim
