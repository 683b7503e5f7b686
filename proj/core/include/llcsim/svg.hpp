#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "llcsim/experiments.hpp"

namespace llcsim {

// Static bar chart of slowdown per parameter value with a horizontal rule
// at slowdown 1.0. Presentation only; no exactness contract.
std::string render_svg_bars(std::span<const SweepRow> rows,
                            std::string_view title, std::string_view x_label);

void emit_svg(std::span<const SweepRow> rows, const std::filesystem::path& dest,
              std::string_view title, std::string_view x_label);

}  // namespace llcsim
