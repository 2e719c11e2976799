#include "rigidity/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <string>

namespace rigidity {

namespace {

constexpr double kCanvas = 800.0;
constexpr double kMargin = 40.0;  // 5% of the viewbox

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", x);
  return buf;
}

}  // namespace

std::string render_svg(const FrameworkDocument& doc) {
  const Framework& fw = doc.framework;
  if (fw.dim() != 2) throw Error("SVG output is only available for d = 2");
  const auto& p = fw.config().points();
  const int v = fw.graph().vertex_count();

  const double min_x = p.row(0).minCoeff();
  const double max_x = p.row(0).maxCoeff();
  const double min_y = p.row(1).minCoeff();
  const double max_y = p.row(1).maxCoeff();
  const double extent = std::max({max_x - min_x, max_y - min_y, 0.0});
  const double usable = kCanvas - 2.0 * kMargin;
  const double scale = extent > 0.0 ? usable / extent : 1.0;
  const double offset_x = kMargin + 0.5 * (usable - scale * (max_x - min_x));
  const double offset_y = kMargin + 0.5 * (usable - scale * (max_y - min_y));

  auto to_x = [&](int i) { return offset_x + scale * (p(0, i) - min_x); };
  auto to_y = [&](int i) { return kCanvas - (offset_y + scale * (p(1, i) - min_y)); };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 800\">\n";
  out << "  <style>\n"
         "    .edge { stroke: #444; stroke-width: 2; }\n"
         "    .vertex { fill: #fff; stroke: #222; stroke-width: 2; }\n"
         "    .shared { fill: #f4a63a; stroke: #222; stroke-width: 2; }\n"
         "    .label { font: 16px sans-serif; text-anchor: middle; }\n"
         "  </style>\n";
  for (const Edge& e : fw.graph().edges()) {
    out << "  <line class=\"edge\" x1=\"" << num(to_x(e.first)) << "\" y1=\""
        << num(to_y(e.first)) << "\" x2=\"" << num(to_x(e.second)) << "\" y2=\""
        << num(to_y(e.second)) << "\"/>\n";
  }
  for (int i = 0; i < v; ++i) {
    const bool shared =
        std::find(doc.shared.begin(), doc.shared.end(), i) != doc.shared.end();
    out << "  <circle class=\"" << (shared ? "shared" : "vertex") << "\" cx=\""
        << num(to_x(i)) << "\" cy=\"" << num(to_y(i)) << "\" r=\"10\"/>\n";
    out << "  <text class=\"label\" x=\"" << num(to_x(i)) << "\" y=\""
        << num(to_y(i) - 14.0) << "\">" << (i + 1) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace rigidity
