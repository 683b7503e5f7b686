#include "llcsim/config.hpp"

#include <charconv>
#include <fstream>

namespace llcsim {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string{s.substr(first, last - first + 1)};
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size())
    throw ConfigError(key, "invalid value for key '" + key + "': '" + value +
                               "' (expected unsigned integer)");
  return out;
}

}  // namespace

std::vector<std::uint64_t> parse_uint_list(const std::string& key,
                                           const std::string& value) {
  std::vector<std::uint64_t> out;
  std::size_t pos = 0;
  while (pos <= value.size()) {
    std::size_t comma = value.find(',', pos);
    if (comma == std::string::npos) comma = value.size();
    const std::string item = trim(value.substr(pos, comma - pos));
    if (item.empty())
      throw ConfigError(key, "invalid value for key '" + key + "': '" + value +
                                 "' (expected comma-separated integers)");
    out.push_back(parse_u64(key, item));
    pos = comma + 1;
  }
  return out;
}

void RunConfig::apply_key(const std::string& key, const std::string& value) {
  if (key == "line_size_bytes")
    geometry.line_size_bytes = static_cast<std::uint32_t>(parse_u64(key, value));
  else if (key == "num_lines")
    geometry.num_lines = static_cast<std::uint32_t>(parse_u64(key, value));
  else if (key == "associativity")
    geometry.associativity = static_cast<std::uint32_t>(parse_u64(key, value));
  else if (key == "llc_hit_cycles")
    timing.llc_hit_cycles = parse_u64(key, value);
  else if (key == "dram_latency_cycles")
    timing.dram_latency_cycles = parse_u64(key, value);
  else if (key == "dram_service_interval_cycles")
    timing.dram_service_interval_cycles = parse_u64(key, value);
  else if (key == "llc_port_interval_cycles")
    timing.llc_port_interval_cycles = parse_u64(key, value);
  else if (key == "kernel") {
    const std::string v = trim(value);
    if (v != "vadd" && v != "gemm" && v != "interference" && v != "copy")
      throw ConfigError(key, "invalid value for key 'kernel': '" + v +
                                 "' (expected vadd, gemm, interference, copy)");
    kernel = v;
  } else if (key == "n")
    n = parse_u64(key, value);
  else if (key == "m")
    m = parse_u64(key, value);
  else if (key == "k")
    k = parse_u64(key, value);
  else if (key == "runs")
    runs = parse_u64(key, value);
  else if (key == "threads")
    threads = static_cast<std::uint32_t>(parse_u64(key, value));
  else if (key == "interference_n")
    interference_n = parse_u64(key, value);
  else if (key == "strides")
    strides = parse_uint_list(key, value);
  else if (key == "cache_lines")
    cache_lines = parse_uint_list(key, value);
  else if (key == "out")
    out = trim(value);
  else if (key == "format") {
    const std::string v = trim(value);
    if (v != "csv" && v != "svg" && v != "both")
      throw ConfigError(key, "invalid value for key 'format': '" + v +
                                 "' (expected csv, svg, both)");
    format = v;
  } else
    throw ConfigError(key, "unknown config key '" + key + "'");
}

void RunConfig::merge_file(const std::filesystem::path& path) {
  std::ifstream file(path);
  if (!file)
    throw ConfigError("config", "cannot open config file: " + path.string());

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(file, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config", "malformed line " + std::to_string(line_no) +
                                      " in " + path.string() +
                                      " (expected key = value)");
    apply_key(trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
  }
}

void RunConfig::validate() const {
  geometry.validate();
  timing.validate();
  if (threads && (*threads == 0 || *threads > 1024))
    throw ConfigError("threads", "invalid value for key 'threads': must be in [1, 1024]");
}

}  // namespace llcsim
