#include "llcsim/cache.hpp"

#include <algorithm>

namespace llcsim {

namespace {

bool is_pow2(std::uint64_t v) { return v != 0 && (v & (v - 1)) == 0; }

}  // namespace

void CacheGeometry::validate() const {
  if (!is_pow2(line_size_bytes))
    throw std::invalid_argument("line_size_bytes must be a nonzero power of two");
  if (num_lines == 0) throw std::invalid_argument("num_lines must be positive");
  if (associativity == 0)
    throw std::invalid_argument("associativity must be positive");
  if (num_lines % associativity != 0)
    throw std::invalid_argument("associativity must divide num_lines");
}

std::uint64_t set_index(const CacheGeometry& g, Addr addr) {
  return (addr / g.line_size_bytes) % g.num_sets();
}

std::uint64_t footprint_lines(const CacheGeometry& g, Addr base,
                              std::uint64_t len) {
  if (len == 0) return 0;
  const Addr first = base / g.line_size_bytes;
  const Addr last = (base + len - 1) / g.line_size_bytes;
  return last - first + 1;
}

CacheState::CacheState(const CacheGeometry& geometry) : geometry_(geometry) {
  geometry_.validate();
  sets_.resize(geometry_.num_sets());
  for (auto& set : sets_) set.reserve(geometry_.associativity);
}

AccessOutcome CacheState::access(Addr addr, TxKind kind) {
  (void)kind;  // every kind allocates and refreshes recency identically
  const std::uint64_t line = addr / geometry_.line_size_bytes;
  auto& set = sets_[line % geometry_.num_sets()];

  stats_.accesses++;
  auto it = std::find(set.begin(), set.end(), line);
  if (it != set.end()) {
    stats_.hits++;
    std::rotate(it, it + 1, set.end());  // move to MRU (back)
    return {true, std::nullopt};
  }

  stats_.misses++;
  AccessOutcome out{false, std::nullopt};
  if (set.size() == geometry_.associativity) {
    out.evicted_line = set.front() * geometry_.line_size_bytes;
    set.erase(set.begin());  // LRU lives at the front
    stats_.evictions++;
  }
  set.push_back(line);
  return out;
}

bool CacheState::contains(Addr addr) const {
  const std::uint64_t line = addr / geometry_.line_size_bytes;
  const auto& set = sets_[line % geometry_.num_sets()];
  return std::find(set.begin(), set.end(), line) != set.end();
}

void CacheState::reset() {
  stats_ = CacheStats{};
  for (auto& set : sets_) set.clear();
}

}  // namespace llcsim
