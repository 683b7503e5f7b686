#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "llcsim/cache.hpp"
#include "llcsim/types.hpp"

namespace llcsim {

// A contiguous array in the flat physical address space.
struct Buffer {
  Addr base_address = 0;
  std::uint32_t element_size_bytes = 1;
  std::uint64_t length_elements = 0;

  std::uint64_t extent_bytes() const {
    return std::uint64_t{element_size_bytes} * length_elements;
  }
  Addr element_addr(std::uint64_t index) const {
    return base_address + index * element_size_bytes;
  }
};

struct WarpModel {
  std::uint32_t warp_size = 32;
  std::uint32_t threads_per_block = 1024;

  // warp_size >= 1, 1 <= threads_per_block <= 1024.
  void validate() const;

  bool operator==(const WarpModel&) const = default;
};

struct VaddSpec {
  std::uint64_t n = 0;  // elements, 4 bytes each
};

struct GemmSpec {
  std::uint64_t m = 0, n = 0, k = 0;  // row-major, 4-byte elements
};

struct InterferenceSpec {
  std::uint64_t n = 0;       // bytes per array (two arrays: read src, write dst)
  std::uint64_t stride = 1;  // byte distance between consecutive elements
  std::uint64_t runs = 1;
  WarpModel warp;
};

struct CopyLoopSpec {
  std::uint64_t cache_lines = 0;  // lines installed per run
  std::uint64_t runs = 1;
};

using KernelSpec = std::variant<VaddSpec, GemmSpec, InterferenceSpec, CopyLoopSpec>;

struct TxContext {
  Requestor requestor = Requestor::Sm0;
  int stream_id = 0;
};

// Trace partitioned into issue groups. One group holds every coalesced
// transaction of one block-wide memory instruction; the engine keeps a
// whole group in flight together and issues the next group when the
// previous one has fully completed. group_len entries sum to tx.size().
struct Trace {
  std::vector<Transaction> tx;
  std::vector<std::uint32_t> group_len;

  bool empty() const { return tx.empty(); }
};

// One transaction per distinct line touched by one warp instruction,
// ascending line order, duplicates merged.
std::vector<Transaction> coalesce_warp(std::span<const Addr> accesses,
                                       const CacheGeometry& g, TxKind kind,
                                       TxContext ctx);

// Active lanes of one block-wide instruction over a stride lattice. The
// block's issue window spans at most threads * line_size bytes, so strides
// beyond the line size leave lanes idle: full occupancy up to the line
// size, then threads * line_size / stride (floored, at least 1).
std::uint32_t active_lanes_per_wave(std::uint32_t threads,
                                    std::uint32_t line_size_bytes,
                                    std::uint64_t stride);

// Line-aligned monotone address assignment. Buffers never overlap; layout
// depends only on allocation order, keeping runs reproducible.
class BumpAllocator {
 public:
  explicit BumpAllocator(std::uint32_t line_size_bytes)
      : line_size_(line_size_bytes) {}

  Buffer alloc(std::uint32_t element_size_bytes, std::uint64_t length_elements);

 private:
  std::uint32_t line_size_;
  Addr next_ = 0;
};

Trace gen_vadd_trace(const VaddSpec& spec, const Buffer& a, const Buffer& b,
                     const Buffer& c, const CacheGeometry& g, TxContext ctx);

Trace gen_gemm_trace(const GemmSpec& spec, const Buffer& a, const Buffer& b,
                     const Buffer& c, const CacheGeometry& g, TxContext ctx);

Trace gen_interference_trace(const InterferenceSpec& spec, const Buffer& r,
                             const Buffer& w, const CacheGeometry& g,
                             TxContext ctx);

Trace gen_copy_trace(const CopyLoopSpec& spec, const Buffer& dst,
                     const CacheGeometry& g, TxContext ctx);

// Allocates the kernel's buffers from `alloc` and generates its trace.
Trace build_stream_trace(const KernelSpec& kernel, const CacheGeometry& g,
                         TxContext ctx, BumpAllocator& alloc);

// Rejects specs the generators cannot realize (stride 0, oversized copy,
// bad warp shape). Used by SimConfig validation before any allocation.
void validate_kernel(const KernelSpec& kernel, const CacheGeometry& g);

}  // namespace llcsim
