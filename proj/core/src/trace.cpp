#include "llcsim/trace.hpp"

#include <algorithm>
#include <stdexcept>

namespace llcsim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

constexpr std::uint32_t kWarpSize = 32;
constexpr std::uint32_t kThreadsPerBlock = 1024;  // one block drives each kernel
constexpr std::uint64_t kCopyBurstLines = 256;    // lines installed per DMA burst

// Appends one issue group: every warp's coalesced transactions for one
// block-wide instruction step. addr_of maps an active lane to its byte
// address. Lanes are packed into warps of warp_size in order.
template <typename AddrFn>
void append_group(Trace& trace, std::uint64_t lanes, std::uint32_t warp_size,
                  const CacheGeometry& g, TxKind kind, TxContext ctx,
                  AddrFn&& addr_of) {
  if (lanes == 0) return;
  const std::size_t start = trace.tx.size();
  std::vector<Addr> warp_addrs;
  warp_addrs.reserve(warp_size);
  for (std::uint64_t lo = 0; lo < lanes; lo += warp_size) {
    const std::uint64_t hi = std::min<std::uint64_t>(lanes, lo + warp_size);
    warp_addrs.clear();
    for (std::uint64_t lane = lo; lane < hi; ++lane)
      warp_addrs.push_back(addr_of(lane));
    auto tx = coalesce_warp(warp_addrs, g, kind, ctx);
    trace.tx.insert(trace.tx.end(), tx.begin(), tx.end());
  }
  trace.group_len.push_back(
      static_cast<std::uint32_t>(trace.tx.size() - start));
}

}  // namespace

void WarpModel::validate() const {
  if (warp_size == 0)
    throw std::invalid_argument("warp_size must be positive");
  if (threads_per_block == 0 || threads_per_block > 1024)
    throw std::invalid_argument("threads_per_block must be in [1, 1024]");
}

std::vector<Transaction> coalesce_warp(std::span<const Addr> accesses,
                                       const CacheGeometry& g, TxKind kind,
                                       TxContext ctx) {
  std::vector<std::uint64_t> lines;
  lines.reserve(accesses.size());
  for (Addr a : accesses) lines.push_back(a / g.line_size_bytes);
  std::sort(lines.begin(), lines.end());
  lines.erase(std::unique(lines.begin(), lines.end()), lines.end());

  std::vector<Transaction> out;
  out.reserve(lines.size());
  for (std::uint64_t line : lines)
    out.push_back(
        {line * g.line_size_bytes, kind, ctx.requestor, ctx.stream_id});
  return out;
}

std::uint32_t active_lanes_per_wave(std::uint32_t threads,
                                    std::uint32_t line_size_bytes,
                                    std::uint64_t stride) {
  if (stride <= line_size_bytes) return threads;
  const std::uint64_t lanes =
      std::uint64_t{threads} * line_size_bytes / stride;
  if (lanes == 0) return 1;
  return static_cast<std::uint32_t>(std::min<std::uint64_t>(lanes, threads));
}

Buffer BumpAllocator::alloc(std::uint32_t element_size_bytes,
                            std::uint64_t length_elements) {
  Buffer b{next_, element_size_bytes, length_elements};
  const std::uint64_t extent = b.extent_bytes();
  next_ += (extent + line_size_ - 1) / line_size_ * line_size_;
  return b;
}

Trace gen_vadd_trace(const VaddSpec& spec, const Buffer& a, const Buffer& b,
                     const Buffer& c, const CacheGeometry& g, TxContext ctx) {
  Trace t;
  for (std::uint64_t base = 0; base < spec.n; base += kThreadsPerBlock) {
    const std::uint64_t lanes =
        std::min<std::uint64_t>(kThreadsPerBlock, spec.n - base);
    append_group(t, lanes, kWarpSize, g, TxKind::Read, ctx,
                 [&](std::uint64_t lane) { return a.element_addr(base + lane); });
    append_group(t, lanes, kWarpSize, g, TxKind::Read, ctx,
                 [&](std::uint64_t lane) { return b.element_addr(base + lane); });
    append_group(t, lanes, kWarpSize, g, TxKind::Write, ctx,
                 [&](std::uint64_t lane) { return c.element_addr(base + lane); });
  }
  return t;
}

Trace gen_gemm_trace(const GemmSpec& spec, const Buffer& a, const Buffer& b,
                     const Buffer& c, const CacheGeometry& g, TxContext ctx) {
  Trace t;
  const std::uint64_t total = spec.m * spec.n;  // one thread per C element
  for (std::uint64_t base = 0; base < total; base += kThreadsPerBlock) {
    const std::uint64_t lanes =
        std::min<std::uint64_t>(kThreadsPerBlock, total - base);
    for (std::uint64_t l = 0; l < spec.k; ++l) {
      append_group(t, lanes, kWarpSize, g, TxKind::Read, ctx,
                   [&](std::uint64_t lane) {
                     const std::uint64_t i = (base + lane) / spec.n;
                     return a.element_addr(i * spec.k + l);
                   });
      append_group(t, lanes, kWarpSize, g, TxKind::Read, ctx,
                   [&](std::uint64_t lane) {
                     const std::uint64_t j = (base + lane) % spec.n;
                     return b.element_addr(l * spec.n + j);
                   });
    }
    append_group(t, lanes, kWarpSize, g, TxKind::Write, ctx,
                 [&](std::uint64_t lane) { return c.element_addr(base + lane); });
  }
  return t;
}

Trace gen_interference_trace(const InterferenceSpec& spec, const Buffer& r,
                             const Buffer& w, const CacheGeometry& g,
                             TxContext ctx) {
  if (spec.stride == 0)
    throw std::invalid_argument("interference stride must be at least 1");
  spec.warp.validate();

  Trace t;
  if (spec.n == 0) return t;
  // Element j touches byte j * stride of each array, for j * stride < n.
  const std::uint64_t elems = (spec.n + spec.stride - 1) / spec.stride;
  const std::uint32_t wave_lanes = active_lanes_per_wave(
      spec.warp.threads_per_block, g.line_size_bytes, spec.stride);
  for (std::uint64_t run = 0; run < spec.runs; ++run) {
    for (std::uint64_t base = 0; base < elems; base += wave_lanes) {
      const std::uint64_t lanes =
          std::min<std::uint64_t>(wave_lanes, elems - base);
      append_group(t, lanes, spec.warp.warp_size, g, TxKind::Read, ctx,
                   [&](std::uint64_t lane) {
                     return r.base_address + (base + lane) * spec.stride;
                   });
      append_group(t, lanes, spec.warp.warp_size, g, TxKind::Write, ctx,
                   [&](std::uint64_t lane) {
                     return w.base_address + (base + lane) * spec.stride;
                   });
    }
  }
  return t;
}

Trace gen_copy_trace(const CopyLoopSpec& spec, const Buffer& dst,
                     const CacheGeometry& g, TxContext ctx) {
  if (spec.cache_lines > g.num_lines)
    throw std::invalid_argument("cache_lines exceeds num_lines");

  Trace t;
  for (std::uint64_t run = 0; run < spec.runs; ++run) {
    for (std::uint64_t first = 0; first < spec.cache_lines;
         first += kCopyBurstLines) {
      const std::uint64_t count =
          std::min(kCopyBurstLines, spec.cache_lines - first);
      for (std::uint64_t i = 0; i < count; ++i)
        t.tx.push_back({dst.base_address + (first + i) * g.line_size_bytes,
                        TxKind::Fill, ctx.requestor, ctx.stream_id});
      t.group_len.push_back(static_cast<std::uint32_t>(count));
    }
  }
  return t;
}

Trace build_stream_trace(const KernelSpec& kernel, const CacheGeometry& g,
                         TxContext ctx, BumpAllocator& alloc) {
  return std::visit(
      overloaded{
          [&](const VaddSpec& s) {
            const Buffer a = alloc.alloc(4, s.n);
            const Buffer b = alloc.alloc(4, s.n);
            const Buffer c = alloc.alloc(4, s.n);
            return gen_vadd_trace(s, a, b, c, g, ctx);
          },
          [&](const GemmSpec& s) {
            const Buffer a = alloc.alloc(4, s.m * s.k);
            const Buffer b = alloc.alloc(4, s.k * s.n);
            const Buffer c = alloc.alloc(4, s.m * s.n);
            return gen_gemm_trace(s, a, b, c, g, ctx);
          },
          [&](const InterferenceSpec& s) {
            const Buffer r = alloc.alloc(1, s.n);
            const Buffer w = alloc.alloc(1, s.n);
            return gen_interference_trace(s, r, w, g, ctx);
          },
          [&](const CopyLoopSpec& s) {
            const Buffer d = alloc.alloc(g.line_size_bytes, s.cache_lines);
            return gen_copy_trace(s, d, g, ctx);
          },
      },
      kernel);
}

void validate_kernel(const KernelSpec& kernel, const CacheGeometry& g) {
  std::visit(overloaded{
                 [](const VaddSpec&) {},
                 [](const GemmSpec&) {},
                 [](const InterferenceSpec& s) {
                   if (s.stride == 0)
                     throw std::invalid_argument(
                         "interference stride must be at least 1");
                   s.warp.validate();
                 },
                 [&](const CopyLoopSpec& s) {
                   if (s.cache_lines > g.num_lines)
                     throw std::invalid_argument(
                         "cache_lines exceeds num_lines");
                 },
             },
             kernel);
}

}  // namespace llcsim
