#pragma once

#include "llcsim/types.hpp"

namespace llcsim {

// Latency/occupancy parameters in cycles. The LLC port is a single pipeline
// slot held for llc_port_interval_cycles per transaction; the DRAM channel
// is a FIFO whose head occupies it for dram_service_interval_cycles while
// the full transfer takes dram_latency_cycles.
struct TimingParams {
  Cycle llc_hit_cycles = 32;
  Cycle dram_latency_cycles = 200;
  Cycle dram_service_interval_cycles = 4;
  Cycle llc_port_interval_cycles = 1;

  // All four are nonzero and the DRAM latency covers at least one
  // service interval.
  void validate() const;

  bool operator==(const TimingParams&) const = default;
};

// Busy-until horizons of the two shared resources. Time never flows
// backwards through either field.
struct ChannelState {
  Cycle llc_port_free_at = 0;
  Cycle dram_free_at = 0;
};

// Advances channel state for one transaction that becomes eligible at
// `issue` and returns its completion cycle. Hits pay the port plus the
// LLC latency; misses and fills additionally queue on the DRAM channel.
Cycle service_transaction(ChannelState& ch, const TimingParams& t, bool hit,
                          TxKind kind, Cycle issue);

}  // namespace llcsim
