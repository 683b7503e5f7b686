#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "llcsim/cache.hpp"
#include "llcsim/timing.hpp"
#include "llcsim/trace.hpp"

namespace llcsim {

// Carries the offending key so diagnostics can point at it.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(message), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

// Everything settable from a config file or CLI flags. Workload keys stay
// optional until a subcommand resolves them against its kernel.
struct RunConfig {
  CacheGeometry geometry;
  TimingParams timing;

  std::optional<std::string> kernel;
  std::optional<std::uint64_t> n;
  std::optional<std::uint64_t> m;
  std::optional<std::uint64_t> k;
  std::optional<std::uint64_t> runs;
  std::optional<std::uint32_t> threads;
  std::optional<std::uint64_t> interference_n;
  std::vector<std::uint64_t> strides;
  std::vector<std::uint64_t> cache_lines;
  std::optional<std::string> out;
  std::optional<std::string> format;  // csv | svg | both

  // Applies one key=value pair; throws ConfigError on an unknown key or a
  // value that fails to parse.
  void apply_key(const std::string& key, const std::string& value);

  // Parses a flat key=value file ('#' comments, blank lines allowed).
  void merge_file(const std::filesystem::path& path);

  // Cross-key validation (geometry, timing, format). Workload values are
  // checked later against the chosen kernel.
  void validate() const;
};

std::vector<std::uint64_t> parse_uint_list(const std::string& key,
                                           const std::string& value);

}  // namespace llcsim
