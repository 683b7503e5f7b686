#include "llcsim/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "llcsim/csv.hpp"

namespace llcsim {

std::string render_svg_bars(std::span<const SweepRow> rows,
                            std::string_view title, std::string_view x_label) {
  constexpr double kWidth = 720, kHeight = 420;
  constexpr double kLeft = 64, kRight = 24, kTop = 48, kBottom = 64;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;

  double max_sd = 1.0;
  for (const SweepRow& r : rows) max_sd = std::max(max_sd, r.slowdown);
  const double y_max = std::max(2.0, std::ceil(max_sd * 1.1));
  const auto y_of = [&](double v) { return kTop + plot_h * (1.0 - v / y_max); };

  std::ostringstream svg;
  svg.setf(std::ios::fixed);
  svg.precision(1);
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
      << kHeight << "\">\n";
  svg << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"28\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">"
      << title << "</text>\n";

  // axes
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft
      << "\" y2=\"" << kTop + plot_h << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\""
      << kLeft + plot_w << "\" y2=\"" << kTop + plot_h
      << "\" stroke=\"black\"/>\n";

  const int ticks = 5;
  for (int i = 0; i <= ticks; ++i) {
    const double v = y_max * i / ticks;
    const double y = y_of(v);
    svg << "<line x1=\"" << kLeft - 4 << "\" y1=\"" << y << "\" x2=\"" << kLeft
        << "\" y2=\"" << y << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << kLeft - 8 << "\" y=\"" << y + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << v << "</text>\n";
  }

  const std::size_t n = rows.size();
  const double slot = n > 0 ? plot_w / static_cast<double>(n) : plot_w;
  const double bar_w = slot * 0.6;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = kLeft + slot * static_cast<double>(i) + (slot - bar_w) / 2;
    const double y = y_of(rows[i].slowdown);
    svg << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << bar_w
        << "\" height=\"" << (kTop + plot_h - y)
        << "\" fill=\"steelblue\"/>\n";
    svg << "<text x=\"" << x + bar_w / 2 << "\" y=\"" << kTop + plot_h + 16
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << rows[i].param << "</text>\n";
    svg.precision(2);
    svg << "<text x=\"" << x + bar_w / 2 << "\" y=\"" << y - 4
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"10\">"
        << rows[i].slowdown << "</text>\n";
    svg.precision(1);
  }

  // unit-slowdown reference rule
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << y_of(1.0) << "\" x2=\""
      << kLeft + plot_w << "\" y2=\"" << y_of(1.0)
      << "\" stroke=\"red\" stroke-dasharray=\"6,3\"/>\n";

  svg << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 18
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\">"
      << x_label << "</text>\n";
  svg << "<text x=\"18\" y=\"" << kTop + plot_h / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\" transform=\"rotate(-90 18 "
      << kTop + plot_h / 2 << ")\">slowdown</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

void emit_svg(std::span<const SweepRow> rows, const std::filesystem::path& dest,
              std::string_view title, std::string_view x_label) {
  write_file_atomic(dest, render_svg_bars(rows, title, x_label));
}

}  // namespace llcsim
