#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <string>

#include "kp/power_diagram.hpp"

namespace kp {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

// SVG's y axis points down; every emitted y is negated.
std::string point(Vec2 p) { return num(p.x) + " " + num(-p.y); }

std::string arc_command(const CircularArc& arc) {
  // A counter-clockwise sweep in the math frame is sweep-flag 0 once y is flipped.
  const std::string r = num(arc.radius);
  if (arc.sweep >= 2.0 * std::numbers::pi - 1e-12) {
    const Vec2 mid = arc.center + polar(arc.radius, arc.start_angle + std::numbers::pi);
    return "A " + r + " " + r + " 0 0 0 " + point(mid) + " A " + r + " " + r + " 0 0 0 " +
           point(arc.start());
  }
  const int large = arc.sweep > std::numbers::pi ? 1 : 0;
  return "A " + r + " " + r + " 0 " + std::to_string(large) + " 0 " + point(arc.end());
}

std::string cell_path(const CircularPolygon& cp) {
  std::string d = "M " + point(element_start(cp.boundary.front()));
  for (const auto& e : cp.boundary) {
    if (const auto* seg = std::get_if<LineSegment>(&e)) {
      d += " L " + point(seg->b);
    } else {
      d += " " + arc_command(std::get<CircularArc>(e));
    }
  }
  return d + " Z";
}

}  // namespace

std::string diagram_svg(const PowerDiagram& diagram, const SvgOptions& options) {
  const Configuration& cfg = diagram.config();
  double x0 = std::numeric_limits<double>::max();
  double y0 = x0;
  double x1 = std::numeric_limits<double>::lowest();
  double y1 = x1;
  for (std::size_t i = 0; i < cfg.size(); ++i) {
    const Vec2 c = cfg.center2(i);
    const double r = cfg.radius(i);
    x0 = std::min(x0, c.x - r);
    x1 = std::max(x1, c.x + r);
    y0 = std::min(y0, c.y - r);
    y1 = std::max(y1, c.y + r);
  }
  x0 -= options.margin;
  y0 -= options.margin;
  x1 += options.margin;
  y1 += options.margin;
  const double w = x1 - x0;
  const double h = y1 - y0;
  const double stroke = 0.005 * std::max(w, h);

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w * options.pixels_per_unit) +
         "\" height=\"" + num(h * options.pixels_per_unit) + "\" viewBox=\"" + num(x0) + " " +
         num(-y1) + " " + num(w) + " " + num(h) + "\">\n";
  out += "<g id=\"disks\" fill=\"none\" stroke=\"#888888\" stroke-width=\"" + num(stroke) + "\">\n";
  for (std::size_t i = 0; i < cfg.size(); ++i) {
    const Vec2 c = cfg.center2(i);
    out += "<circle cx=\"" + num(c.x) + "\" cy=\"" + num(-c.y) + "\" r=\"" + num(cfg.radius(i)) +
           "\"/>\n";
  }
  out += "</g>\n";

  if (options.draw_cells) {
    const char* fill = diagram.variant() == CellVariant::kNearest ? "#cfe3f7" : "#f7dccf";
    out += "<g id=\"cells\" fill=\"" + std::string(fill) + "\" fill-opacity=\"0.6\" stroke=\"#1f4e79\" stroke-width=\"" +
           num(stroke) + "\">\n";
    for (std::size_t i = 0; i < cfg.size(); ++i) {
      const CircularPolygon cp = truncated_cell(diagram, i, cfg.radius(i));
      if (cp.empty()) continue;
      out += "<path data-index=\"" + std::to_string(i) + "\" d=\"" + cell_path(cp) + "\"/>\n";
    }
    out += "</g>\n";
  }

  if (options.draw_walls) {
    out += "<g id=\"walls\" stroke=\"#c00000\" stroke-width=\"" + num(2.0 * stroke) + "\">\n";
    for (std::size_t i = 0; i < cfg.size(); ++i) {
      for (std::size_t j = i + 1; j < cfg.size(); ++j) {
        const Wall wl = wall(diagram, i, j, cfg.radius(i));
        if (!wl.segment || wl.length <= 0.0) continue;
        out += "<line data-pair=\"" + std::to_string(i) + "," + std::to_string(j) + "\" x1=\"" +
               num(wl.segment->a.x) + "\" y1=\"" + num(-wl.segment->a.y) + "\" x2=\"" +
               num(wl.segment->b.x) + "\" y2=\"" + num(-wl.segment->b.y) + "\"/>\n";
      }
    }
    out += "</g>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace kp
