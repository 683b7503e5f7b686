#pragma once

#include <cstdint>

namespace llcsim {

using Cycle = std::uint64_t;
using Addr = std::uint64_t;

// Fill is a copy-engine install: it allocates like a write but never hits
// on chip, so the timing path treats it as a DRAM transfer unconditionally.
enum class TxKind : std::uint8_t { Read, Write, Fill };

enum class Requestor : std::uint8_t { Sm0, Sm1, CopyEngine };

// One coalesced line-granularity memory transaction. line_addr is the
// byte address of the line head (always a multiple of the line size).
struct Transaction {
  Addr line_addr = 0;
  TxKind kind = TxKind::Read;
  Requestor requestor = Requestor::Sm0;
  int stream_id = 0;

  bool operator==(const Transaction&) const = default;
};

}  // namespace llcsim
