#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "llcsim/types.hpp"

namespace llcsim {

// Geometry of the shared last-level cache. Defaults model a 512 KB LLC with
// 32 B lines and 16-way sets (16384 lines, 1024 sets).
struct CacheGeometry {
  std::uint32_t line_size_bytes = 32;
  std::uint32_t num_lines = 16384;
  std::uint32_t associativity = 16;

  std::uint32_t num_sets() const { return num_lines / associativity; }
  std::uint64_t capacity_bytes() const {
    return std::uint64_t{line_size_bytes} * num_lines;
  }

  // line size and set count must be nonzero powers of two; associativity
  // must divide num_lines.
  void validate() const;

  bool operator==(const CacheGeometry&) const = default;
};

std::uint64_t set_index(const CacheGeometry& g, Addr addr);

// Number of distinct lines overlapped by [base, base+len). Zero-length
// ranges touch nothing.
std::uint64_t footprint_lines(const CacheGeometry& g, Addr base,
                              std::uint64_t len);

struct CacheStats {
  std::uint64_t accesses = 0;
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
  std::uint64_t evictions = 0;

  bool operator==(const CacheStats&) const = default;
};

struct AccessOutcome {
  bool hit = false;
  // Line address of the victim, present only when the fill displaced a
  // resident line.
  std::optional<Addr> evicted_line;
};

// Set-associative LRU state. Every access kind allocates on miss and
// refreshes recency on hit; replacement never consults the kind.
class CacheState {
 public:
  explicit CacheState(const CacheGeometry& geometry);

  // addr is any byte address; the access applies to its containing line.
  AccessOutcome access(Addr addr, TxKind kind);

  const CacheGeometry& geometry() const { return geometry_; }
  const CacheStats& stats() const { return stats_; }

  bool contains(Addr addr) const;
  void reset();

 private:
  CacheGeometry geometry_;
  CacheStats stats_;
  // sets_[s] holds line indices (addr / line_size) in MRU-first order.
  std::vector<std::vector<std::uint64_t>> sets_;
};

}  // namespace llcsim
