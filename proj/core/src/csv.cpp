#include "llcsim/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <system_error>

namespace llcsim {

namespace {

std::uint64_t parse_u64_field(std::string_view field, std::size_t line_no) {
  std::uint64_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size())
    throw std::invalid_argument("csv line " + std::to_string(line_no) +
                             ": bad integer field");
  return value;
}

double parse_double_field(std::string_view field, std::size_t line_no) {
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size())
    throw std::invalid_argument("csv line " + std::to_string(line_no) +
                             ": bad ratio field");
  return value;
}

}  // namespace

std::string format_csv(std::span<const SweepRow> rows) {
  std::string out{kSweepCsvHeader};
  out.push_back('\n');
  char buf[128];
  for (const SweepRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%llu,%llu,%llu,%.4f\n",
                  static_cast<unsigned long long>(r.param),
                  static_cast<unsigned long long>(r.baseline_cycles),
                  static_cast<unsigned long long>(r.contended_cycles),
                  r.slowdown);
    out += buf;
  }
  return out;
}

std::vector<SweepRow> parse_csv(std::string_view text) {
  std::vector<SweepRow> rows;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    if (line_no == 1) {
      if (line != kSweepCsvHeader)
        throw std::invalid_argument("csv header mismatch");
      continue;
    }
    if (line.empty()) continue;

    std::string_view fields[4];
    std::size_t start = 0;
    for (int f = 0; f < 4; ++f) {
      const std::size_t comma =
          f < 3 ? line.find(',', start) : std::string_view::npos;
      if (f < 3 && comma == std::string_view::npos)
        throw std::invalid_argument("csv line " + std::to_string(line_no) +
                                 ": expected 4 fields");
      fields[f] = line.substr(
          start, (f < 3 ? comma : line.size()) - start);
      start = comma + 1;
    }
    if (fields[3].find(',') != std::string_view::npos)
      throw std::invalid_argument("csv line " + std::to_string(line_no) +
                               ": expected 4 fields");

    rows.push_back({parse_u64_field(fields[0], line_no),
                    parse_u64_field(fields[1], line_no),
                    parse_u64_field(fields[2], line_no),
                    parse_double_field(fields[3], line_no)});
  }
  if (line_no == 0) throw std::invalid_argument("csv header mismatch");
  return rows;
}

void write_file_atomic(const std::filesystem::path& dest,
                       std::string_view content) {
  std::filesystem::path tmp = dest;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + tmp.string());
    f.write(content.data(),
            static_cast<std::streamsize>(content.size()));
    f.flush();
    if (!f) throw std::runtime_error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, dest);
}

void emit_csv(std::span<const SweepRow> rows,
              const std::filesystem::path& dest) {
  write_file_atomic(dest, format_csv(rows));
}

}  // namespace llcsim
