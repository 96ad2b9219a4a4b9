#include "cqcode/emit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace cqcode {

std::string format_double(double v) {
  if (v == 0.0) v = 0.0;  // normalize -0
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string Csv::to_string() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out << ',';
    out << header[i];
  }
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << format_double(row[i]);
    }
    out << '\n';
  }
  return out.str();
}

namespace {

constexpr double kW = 480.0, kH = 360.0, kMargin = 48.0;

struct Frame {
  double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;

  double px(double x) const {
    return kMargin + (x - xmin) / std::max(xmax - xmin, 1e-12) * (kW - 2 * kMargin);
  }
  double py(double y) const {
    return kH - kMargin - (y - ymin) / std::max(ymax - ymin, 1e-12) * (kH - 2 * kMargin);
  }
};

void expand(Frame& f, const std::vector<std::array<double, 2>>& pts) {
  for (const auto& p : pts) {
    f.xmax = std::max(f.xmax, p[0] * 1.05);
    f.ymax = std::max(f.ymax, p[1] * 1.05);
  }
}

std::string svg_header() {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"480\" "
         "height=\"360\" viewBox=\"0 0 480 360\">\n"
         "<rect width=\"480\" height=\"360\" fill=\"white\"/>\n";
}

std::string axes(const Frame& f, const std::string& x_label, const std::string& y_label) {
  std::ostringstream out;
  out << "<line x1=\"" << format_double(f.px(f.xmin)) << "\" y1=\"" << format_double(f.py(f.ymin))
      << "\" x2=\"" << format_double(f.px(f.xmax)) << "\" y2=\"" << format_double(f.py(f.ymin))
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << format_double(f.px(f.xmin)) << "\" y1=\"" << format_double(f.py(f.ymin))
      << "\" x2=\"" << format_double(f.px(f.xmin)) << "\" y2=\"" << format_double(f.py(f.ymax))
      << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << format_double(kW / 2) << "\" y=\"" << format_double(kH - 10)
      << "\" font-size=\"12\" text-anchor=\"middle\">" << x_label << "</text>\n";
  out << "<text x=\"14\" y=\"" << format_double(kH / 2)
      << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
      << format_double(kH / 2) << ")\">" << y_label << "</text>\n";
  return out.str();
}

}  // namespace

std::string svg_plot(const std::vector<SvgCurve>& curves, const std::string& x_label,
                     const std::string& y_label) {
  Frame f;
  for (const auto& c : curves) expand(f, c.points);
  std::ostringstream out;
  out << svg_header() << axes(f, x_label, y_label);
  double legend_y = 20.0;
  for (const auto& c : curves) {
    out << "<polyline fill=\"none\" stroke=\"" << c.color << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& p : c.points) {
      out << format_double(f.px(p[0])) << ',' << format_double(f.py(p[1])) << ' ';
    }
    out << "\"/>\n";
    out << "<text x=\"" << format_double(kW - kMargin - 120) << "\" y=\""
        << format_double(legend_y) << "\" font-size=\"11\" fill=\"" << c.color << "\">" << c.label
        << "</text>\n";
    legend_y += 14.0;
  }
  out << "</svg>\n";
  return out.str();
}

std::string svg_regions(const std::vector<SvgPolygon>& polys, const std::string& x_label,
                        const std::string& y_label) {
  Frame f;
  for (const auto& p : polys) expand(f, p.vertices);
  std::ostringstream out;
  out << svg_header() << axes(f, x_label, y_label);
  double legend_y = 20.0;
  for (const auto& p : polys) {
    out << "<polygon fill=\"" << p.color << "\" fill-opacity=\"0.12\" stroke=\"" << p.color
        << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& v : p.vertices) {
      out << format_double(f.px(v[0])) << ',' << format_double(f.py(v[1])) << ' ';
    }
    out << "\"/>\n";
    out << "<text x=\"" << format_double(kW - kMargin - 120) << "\" y=\""
        << format_double(legend_y) << "\" font-size=\"11\" fill=\"" << p.color << "\">" << p.label
        << "</text>\n";
    legend_y += 14.0;
  }
  out << "</svg>\n";
  return out.str();
}

Csv region_csv(const Region2D& region) {
  Csv csv;
  const std::string unit = region.unit == Unit::bits ? "bits" : "nats";
  csv.header = {"r_a_" + unit, "r_b_" + unit};
  for (const auto& v : region.vertices) csv.rows.push_back({v[0], v[1]});
  return csv;
}

}  // namespace cqcode
