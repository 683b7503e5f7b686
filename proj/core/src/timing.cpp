#include "llcsim/timing.hpp"

#include <algorithm>
#include <stdexcept>

namespace llcsim {

void TimingParams::validate() const {
  if (llc_hit_cycles == 0 || dram_latency_cycles == 0 ||
      dram_service_interval_cycles == 0 || llc_port_interval_cycles == 0)
    throw std::invalid_argument("timing parameters must be positive");
  if (dram_latency_cycles < dram_service_interval_cycles)
    throw std::invalid_argument(
        "dram_latency_cycles must cover dram_service_interval_cycles");
}

Cycle service_transaction(ChannelState& ch, const TimingParams& t, bool hit,
                          TxKind kind, Cycle issue) {
  const Cycle port_start = std::max(issue, ch.llc_port_free_at);
  ch.llc_port_free_at = port_start + t.llc_port_interval_cycles;

  // A Fill transfers from the host regardless of residency, so only
  // genuine on-chip hits take the short path.
  if (hit && kind != TxKind::Fill) return port_start + t.llc_hit_cycles;

  const Cycle dram_start = std::max(port_start, ch.dram_free_at);
  ch.dram_free_at = dram_start + t.dram_service_interval_cycles;
  return dram_start + t.dram_latency_cycles;
}

}  // namespace llcsim
