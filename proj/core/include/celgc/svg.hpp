#pragma once

#include <string>
#include <vector>

namespace celgc {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Static line chart: labeled axes, tick marks, a legend, one polyline per
/// series (a lone marker for single-point series). Deterministic output.
std::string render_line_chart(const std::vector<Series>& series,
                              const std::string& x_label,
                              const std::string& y_label,
                              const std::string& title);

/// Renders and writes; throws on an empty series list (no file is created).
void emit_svg_lines(const std::vector<Series>& series,
                    const std::string& x_label, const std::string& y_label,
                    const std::string& title, const std::string& path);

}  // namespace celgc
