#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "llcsim/cache.hpp"
#include "llcsim/timing.hpp"
#include "llcsim/trace.hpp"
#include "llcsim/types.hpp"

namespace llcsim {

struct StreamBinding {
  int stream_id = 0;
  Requestor requestor = Requestor::Sm0;
  KernelSpec kernel;
};

struct SimConfig {
  CacheGeometry geometry;
  TimingParams timing;
  std::vector<StreamBinding> streams;

  // Unique stream ids, at least one stream, copy loops on the copy engine
  // and nowhere else, at most one compute kernel per SM.
  void validate() const;
};

struct SimResult {
  Cycle total_cycles = 0;
  std::map<int, Cycle> per_stream_cycles;
  CacheStats cache_stats;
  std::uint64_t transactions_issued = 0;

  bool operator==(const SimResult&) const = default;
};

// Replays all streams through one shared cache and channel. The measured
// stream runs its trace once; every other stream replays cyclically until
// the measured stream's last group completes. Streams are serviced in
// issue-time order, ties broken round-robin; a group's transactions share
// its issue time and the stream's next group issues at group completion.
SimResult run(const SimConfig& config, int measured_stream);

SimResult run_isolated(const KernelSpec& kernel, const CacheGeometry& g,
                       const TimingParams& t);

// contended cycles / baseline cycles. Throws on an empty baseline.
double slowdown(const SimResult& contended, const SimResult& baseline);

// CopyEngine for copy loops, Sm0 otherwise.
Requestor default_requestor(const KernelSpec& kernel);

}  // namespace llcsim
