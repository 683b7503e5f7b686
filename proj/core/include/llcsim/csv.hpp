#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "llcsim/experiments.hpp"

namespace llcsim {

inline constexpr std::string_view kSweepCsvHeader =
    "param,baseline_cycles,contended_cycles,slowdown";

// UTF-8, LF line endings, '.' decimal separator, slowdown with exactly
// four fractional digits.
std::string format_csv(std::span<const SweepRow> rows);

// Strict inverse of format_csv at the printed precision. Throws on a
// malformed header or row.
std::vector<SweepRow> parse_csv(std::string_view text);

// Writes to a sibling temp file and renames, so the destination is never
// observed half-written.
void write_file_atomic(const std::filesystem::path& dest,
                       std::string_view content);

void emit_csv(std::span<const SweepRow> rows,
              const std::filesystem::path& dest);

}  // namespace llcsim
