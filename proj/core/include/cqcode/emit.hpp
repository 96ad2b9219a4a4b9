#pragma once

#include <string>
#include <vector>

#include "cqcode/regions.hpp"

namespace cqcode {

// Deterministic CSV: fixed %.12g formatting, header row naming columns.
struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::string to_string() const;
};

std::string format_double(double v);

// Standalone SVG 1.1 line plot; one polyline per curve.
struct SvgCurve {
  std::string label;
  std::string color;
  std::vector<std::array<double, 2>> points;
};
std::string svg_plot(const std::vector<SvgCurve>& curves, const std::string& x_label,
                     const std::string& y_label);

// Region overlay: closed polygons.
struct SvgPolygon {
  std::string label;
  std::string color;
  std::vector<std::array<double, 2>> vertices;
};
std::string svg_regions(const std::vector<SvgPolygon>& polys, const std::string& x_label,
                        const std::string& y_label);

Csv region_csv(const Region2D& region);

}  // namespace cqcode
