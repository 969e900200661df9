#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "scattersmooth/harness.hpp"

namespace scattersmooth {

namespace {

constexpr double kWidth = 960.0;
constexpr double kHeight = 600.0;
constexpr double kMarginLeft = 64.0;
constexpr double kMarginRight = 16.0;
constexpr double kMarginTop = 20.0;
constexpr double kMarginBottom = 44.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#17becf", "#bcbd22"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.5g", v);
  return buf;
}

struct Mapper {
  double x_min, x_max, y_min, y_max;

  double px(double x) const {
    return kMarginLeft + (x - x_min) / (x_max - x_min) * (kWidth - kMarginLeft - kMarginRight);
  }
  double py(double y) const {
    return kHeight - kMarginBottom -
           (y - y_min) / (y_max - y_min) * (kHeight - kMarginTop - kMarginBottom);
  }
};

void write_polyline(std::ofstream& out, const Mapper& map,
                    const std::vector<double>& xs, const std::vector<double>& ys,
                    const char* color, double width) {
  out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\""
      << width << "\" points=\"";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    out << fmt(map.px(xs[i])) << ',' << fmt(map.py(ys[i])) << ' ';
  }
  out << "\"/>\n";
}

std::vector<double> axis_1d(const PointSet& points) {
  std::vector<double> xs(points.size());
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = points[i][0];
  return xs;
}

}  // namespace

void write_svg_chart(const std::string& path, const ExperimentReport& report) {
  if (report.reference.positions.dimension() != 1) {
    throw IoError("svg chart supports 1D experiments only");
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);

  const std::vector<double> ref_x = axis_1d(report.reference.positions);
  const std::vector<double> noisy_x = axis_1d(report.noisy.positions);
  const std::vector<double> query_x = axis_1d(report.query_positions);

  double x_min = ref_x.front(), x_max = ref_x.front();
  double y_min = report.reference.values.front(), y_max = y_min;
  auto widen = [&](const std::vector<double>& xs, const std::vector<double>& ys) {
    for (double x : xs) {
      x_min = std::min(x_min, x);
      x_max = std::max(x_max, x);
    }
    for (double y : ys) {
      y_min = std::min(y_min, y);
      y_max = std::max(y_max, y);
    }
  };
  widen(ref_x, report.reference.values);
  widen(noisy_x, report.noisy.values);
  for (const MethodResult& m : report.methods) {
    if (m.ok) widen(query_x, m.curve);
  }
  if (x_max == x_min) x_max = x_min + 1.0;
  if (y_max == y_min) y_max = y_min + 1.0;
  const double pad = 0.05 * (y_max - y_min);
  const Mapper map{x_min, x_max, y_min - pad, y_max + pad};

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << kWidth
      << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n";

  // Axes with a few ticks.
  const double x0 = map.px(map.x_min), x1 = map.px(map.x_max);
  const double y0 = map.py(map.y_min), y1 = map.py(map.y_max);
  out << "<line x1=\"" << fmt(x0) << "\" y1=\"" << fmt(y0) << "\" x2=\"" << fmt(x1)
      << "\" y2=\"" << fmt(y0) << "\" stroke=\"#444\"/>\n";
  out << "<line x1=\"" << fmt(x0) << "\" y1=\"" << fmt(y0) << "\" x2=\"" << fmt(x0)
      << "\" y2=\"" << fmt(y1) << "\" stroke=\"#444\"/>\n";
  const int ticks = 5;
  for (int t = 0; t <= ticks; ++t) {
    const double fx = map.x_min + (map.x_max - map.x_min) * t / ticks;
    const double fy = map.y_min + (map.y_max - map.y_min) * t / ticks;
    out << "<line x1=\"" << fmt(map.px(fx)) << "\" y1=\"" << fmt(y0) << "\" x2=\""
        << fmt(map.px(fx)) << "\" y2=\"" << fmt(y0 + 4) << "\" stroke=\"#444\"/>\n";
    out << "<text x=\"" << fmt(map.px(fx)) << "\" y=\"" << fmt(y0 + 18)
        << "\" text-anchor=\"middle\">" << fmt(fx) << "</text>\n";
    out << "<line x1=\"" << fmt(x0 - 4) << "\" y1=\"" << fmt(map.py(fy)) << "\" x2=\""
        << fmt(x0) << "\" y2=\"" << fmt(map.py(fy)) << "\" stroke=\"#444\"/>\n";
    out << "<text x=\"" << fmt(x0 - 8) << "\" y=\"" << fmt(map.py(fy) + 4)
        << "\" text-anchor=\"end\">" << fmt(fy) << "</text>\n";
  }

  // Noisy samples as faint dots, thinned if very dense.
  const std::size_t stride = std::max<std::size_t>(1, report.noisy.size() / 2000);
  for (std::size_t i = 0; i < report.noisy.size(); i += stride) {
    out << "<circle cx=\"" << fmt(map.px(noisy_x[i])) << "\" cy=\""
        << fmt(map.py(report.noisy.values[i])) << "\" r=\"1.4\" fill=\"#bbbbbb\"/>\n";
  }

  write_polyline(out, map, ref_x, report.reference.values, "#000000", 1.2);

  std::size_t color = 0;
  double legend_y = kMarginTop + 14.0;
  out << "<text x=\"" << fmt(kWidth - kMarginRight - 230) << "\" y=\""
      << fmt(legend_y) << "\" fill=\"#000000\">reference</text>\n";
  legend_y += 16.0;
  for (const MethodResult& m : report.methods) {
    if (!m.ok) continue;
    const char* c = kPalette[color % (sizeof(kPalette) / sizeof(kPalette[0]))];
    write_polyline(out, map, query_x, m.curve, c, 1.6);
    out << "<text x=\"" << fmt(kWidth - kMarginRight - 230) << "\" y=\""
        << fmt(legend_y) << "\" fill=\"" << c << "\">" << m.method.canonical()
        << "</text>\n";
    legend_y += 16.0;
    ++color;
  }

  out << "</svg>\n";
  if (!out.good()) throw IoError("write failed: " + path);
}

}  // namespace scattersmooth
