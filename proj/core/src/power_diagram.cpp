#include "kp/power_diagram.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "kp/error.hpp"

namespace kp {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Brute force below this many centers; bucket lookup above.
constexpr std::size_t kBucketThreshold = 64;
// Points this close to a radical axis count as on it.
constexpr double kAxisTol = 1e-10;

double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  return a;
}

bool lex_less(Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); }

}  // namespace

std::string_view to_string(CellVariant variant) {
  return variant == CellVariant::kNearest ? "nearest" : "farthest";
}

Vec2 CircularArc::start() const { return center + polar(radius, start_angle); }
Vec2 CircularArc::end() const { return center + polar(radius, start_angle + sweep); }

Vec2 element_start(const BoundaryElement& e) {
  return std::visit(
      [](const auto& el) {
        if constexpr (std::is_same_v<std::decay_t<decltype(el)>, LineSegment>) {
          return el.a;
        } else {
          return el.start();
        }
      },
      e);
}

Vec2 element_end(const BoundaryElement& e) {
  return std::visit(
      [](const auto& el) {
        if constexpr (std::is_same_v<std::decay_t<decltype(el)>, LineSegment>) {
          return el.b;
        } else {
          return el.end();
        }
      },
      e);
}

// ---------------------------------------------------------------------------
// PowerDiagram

PowerDiagram::PowerDiagram(Configuration config, CellVariant variant)
    : config_(std::move(config)), variant_(variant) {
  if (config_.dim() != 2) {
    throw Error(ErrorKind::kInvalidInput, "power diagrams are planar only", "dim");
  }
  for (double r : config_.radii()) max_radius_ = std::max(max_radius_, r);

  if (variant_ == CellVariant::kNearest && config_.size() > kBucketThreshold) {
    Vec2 lo{std::numeric_limits<double>::max(), std::numeric_limits<double>::max()};
    Vec2 hi{std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()};
    for (std::size_t i = 0; i < config_.size(); ++i) {
      const Vec2 c = config_.center2(i);
      lo = {std::min(lo.x, c.x), std::min(lo.y, c.y)};
      hi = {std::max(hi.x, c.x), std::max(hi.y, c.y)};
    }
    bucket_size_ = 2.0 * max_radius_;
    // Keep the grid proportional to N even for sparse layouts.
    const double extent = std::max(hi.x - lo.x, hi.y - lo.y);
    const double min_size = extent / std::sqrt(4.0 * static_cast<double>(config_.size()));
    bucket_size_ = std::max(bucket_size_, min_size);
    origin_ = lo;
    nx_ = static_cast<long>((hi.x - lo.x) / bucket_size_) + 1;
    ny_ = static_cast<long>((hi.y - lo.y) / bucket_size_) + 1;
    buckets_.assign(static_cast<std::size_t>(nx_ * ny_), {});
    for (std::size_t i = 0; i < config_.size(); ++i) {
      const Vec2 c = config_.center2(i);
      const long bx = std::min(nx_ - 1, static_cast<long>((c.x - lo.x) / bucket_size_));
      const long by = std::min(ny_ - 1, static_cast<long>((c.y - lo.y) / bucket_size_));
      buckets_[static_cast<std::size_t>(by * nx_ + bx)].push_back(i);
    }
  }
}

HalfPlane PowerDiagram::relative_halfplane(std::size_t i, std::size_t j) const {
  const Vec2 n = config_.center2(j) - config_.center2(i);
  const double ri = config_.radius(i);
  const double rj = config_.radius(j);
  HalfPlane h;
  h.opposing = j;
  if (n == Vec2{}) {
    if (ri == rj) {
      // Identical disks: the lower index owns the shared cell.
      h.offset = j < i ? -1.0 : 0.0;
    } else {
      const double c = 0.5 * (ri * ri - rj * rj);
      h.offset = variant_ == CellVariant::kNearest ? c : -c;
    }
    return h;
  }
  // power_i <= power_j  <=>  n . y <= (|n|^2 + r_i^2 - r_j^2) / 2  with y = x - p_i
  const double c = 0.5 * (norm2(n) + (ri - rj) * (ri + rj));
  if (variant_ == CellVariant::kNearest) {
    h.normal = n;
    h.offset = c;
  } else {
    h.normal = -n;
    h.offset = -c;
  }
  return h;
}

std::vector<HalfPlane> PowerDiagram::halfplanes(std::size_t i) const {
  std::vector<HalfPlane> out;
  out.reserve(size() - 1);
  const Vec2 pi = config_.center2(i);
  for (std::size_t j = 0; j < size(); ++j) {
    if (j == i) continue;
    HalfPlane h = relative_halfplane(i, j);
    h.offset += dot(h.normal, pi);
    out.push_back(h);
  }
  return out;
}

std::vector<std::size_t> PowerDiagram::relevant_neighbors(std::size_t i, double r) const {
  std::vector<std::size_t> out;
  auto consider = [&](std::size_t j) {
    if (j == i) return;
    const HalfPlane h = relative_halfplane(i, j);
    if (h.normal == Vec2{}) {
      if (!h.is_everything()) out.push_back(j);
      return;
    }
    // The disk B(0, r) lies inside {n.y <= c} iff c >= r|n|.
    const double nn = norm(h.normal);
    if (h.offset < r * nn * (1.0 + 1e-9) + 1e-12) out.push_back(j);
  };

  if (buckets_.empty()) {
    for (std::size_t j = 0; j < size(); ++j) consider(j);
    return out;
  }
  const Vec2 c = config_.center2(i);
  const double reach = r + std::sqrt(r * r + max_radius_ * max_radius_);
  const long x0 = std::max(0L, static_cast<long>(std::floor((c.x - reach - origin_.x) / bucket_size_)));
  const long x1 = std::min(nx_ - 1, static_cast<long>(std::floor((c.x + reach - origin_.x) / bucket_size_)));
  const long y0 = std::max(0L, static_cast<long>(std::floor((c.y - reach - origin_.y) / bucket_size_)));
  const long y1 = std::min(ny_ - 1, static_cast<long>(std::floor((c.y + reach - origin_.y) / bucket_size_)));
  for (long by = y0; by <= y1; ++by) {
    for (long bx = x0; bx <= x1; ++bx) {
      for (std::size_t j : buckets_[static_cast<std::size_t>(by * nx_ + bx)]) consider(j);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

double PowerDiagram::power(std::size_t i, Vec2 x) const {
  const double r = config_.radius(i);
  return norm2(x - config_.center2(i)) - r * r;
}

bool PowerDiagram::cell_contains(std::size_t i, Vec2 x, double tol) const {
  const Vec2 y = x - config_.center2(i);
  for (std::size_t j = 0; j < size(); ++j) {
    if (j == i) continue;
    if (!relative_halfplane(i, j).contains(y, tol)) return false;
  }
  return true;
}

PowerDiagram build_diagram(const Configuration& config, CellVariant variant) {
  return PowerDiagram(config, variant);
}

// ---------------------------------------------------------------------------
// Truncated cells

namespace {

// Clips a convex CCW polygon against {n.y <= c}; signed distances within
// tol of the line count as inside.
std::vector<Vec2> clip_polygon(const std::vector<Vec2>& poly, const HalfPlane& h, double tol) {
  std::vector<Vec2> out;
  if (poly.empty()) return out;
  const double nn = norm(h.normal);
  out.reserve(poly.size() + 1);
  for (std::size_t k = 0; k < poly.size(); ++k) {
    const Vec2 a = poly[k];
    const Vec2 b = poly[(k + 1) % poly.size()];
    const double sa = (dot(h.normal, a) - h.offset) / nn;
    const double sb = (dot(h.normal, b) - h.offset) / nn;
    const bool ina = sa <= tol;
    const bool inb = sb <= tol;
    if (ina) out.push_back(a);
    if (ina != inb) {
      const double t = sa / (sa - sb);
      out.push_back(a + t * (b - a));
    }
  }
  if (out.size() < 3) out.clear();
  return out;
}

struct EdgePiece {
  Vec2 a;
  Vec2 b;
};

}  // namespace

CircularPolygon truncated_cell(const PowerDiagram& diagram, std::size_t i, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw Error(ErrorKind::kInvalidInput, "truncation radius must be positive", "r");
  }
  if (i >= diagram.size()) throw Error(ErrorKind::kInvalidInput, "index out of range", "i");

  const double tol = kAxisTol * std::max(1.0, r);
  const double box = 2.0 * r;
  std::vector<Vec2> poly{{-box, -box}, {box, -box}, {box, box}, {-box, box}};
  for (std::size_t j : diagram.relevant_neighbors(i, r)) {
    const HalfPlane h = diagram.relative_halfplane(i, j);
    if (h.is_nothing()) return {};
    if (h.is_everything()) continue;
    poly = clip_polygon(poly, h, tol);
    if (poly.empty()) return {};
  }

  // Intersect the clipped polygon with the disk B(0, r).
  const double r2 = r * r;
  const double min_len = 1e-12 * r;
  std::vector<EdgePiece> pieces;
  for (std::size_t k = 0; k < poly.size(); ++k) {
    const Vec2 a = poly[k];
    const Vec2 e = poly[(k + 1) % poly.size()] - a;
    const double qa = norm2(e);
    if (qa == 0.0) continue;
    const double qb = dot(a, e);
    const double qc = norm2(a) - r2;
    const double disc = qb * qb - qa * qc;
    if (disc <= 0.0) continue;
    const double sq = std::sqrt(disc);
    const double lo = std::max(0.0, (-qb - sq) / qa);
    const double hi = std::min(1.0, (-qb + sq) / qa);
    if (hi <= lo) continue;
    const EdgePiece piece{a + lo * e, a + hi * e};
    if (norm(piece.b - piece.a) < min_len) continue;
    pieces.push_back(piece);
  }

  const Vec2 center = diagram.config().center2(i);
  CircularPolygon out;
  if (pieces.empty()) {
    // No edge meets the open disk: the disk is inside the polygon or disjoint.
    bool inside = true;
    for (std::size_t k = 0; k < poly.size() && inside; ++k) {
      const Vec2 a = poly[k];
      const Vec2 b = poly[(k + 1) % poly.size()];
      inside = cross(b - a, -a) >= 0.0;
    }
    if (inside) out.boundary.emplace_back(CircularArc{center, r, 0.0, kTwoPi, true});
    return out;
  }

  for (std::size_t k = 0; k < pieces.size(); ++k) {
    const EdgePiece& cur = pieces[k];
    const EdgePiece& next = pieces[(k + 1) % pieces.size()];
    out.boundary.emplace_back(LineSegment{center + cur.a, center + cur.b});
    if (norm(next.a - cur.b) > min_len) {
      const double a0 = std::atan2(cur.b.y, cur.b.x);
      const double a1 = std::atan2(next.a.y, next.a.x);
      double sweep = wrap_angle(a1 - a0);
      if (sweep == 0.0) sweep = kTwoPi;
      out.boundary.emplace_back(CircularArc{center, r, wrap_angle(a0), sweep, true});
    }
  }

  // Start from the lexicographically smallest vertex.
  std::size_t first = 0;
  for (std::size_t k = 1; k < out.boundary.size(); ++k) {
    if (lex_less(element_start(out.boundary[k]), element_start(out.boundary[first]))) first = k;
  }
  std::rotate(out.boundary.begin(), out.boundary.begin() + static_cast<std::ptrdiff_t>(first),
              out.boundary.end());
  return out;
}

// ---------------------------------------------------------------------------
// Walls

Wall wall(const PowerDiagram& diagram, std::size_t i, std::size_t j, double r) {
  if (i == j) throw Error(ErrorKind::kInvalidInput, "wall needs two distinct indices", "j");
  if (i >= diagram.size() || j >= diagram.size()) {
    throw Error(ErrorKind::kInvalidInput, "index out of range", "i");
  }
  if (!(r > 0.0)) throw Error(ErrorKind::kInvalidInput, "radius must be positive", "r");

  Wall out;
  out.i = i;
  out.j = j;
  const HalfPlane axis = diagram.relative_halfplane(i, j);
  if (axis.normal == Vec2{}) {
    out.undefined_axis = true;
    return out;
  }
  const double nn2 = norm2(axis.normal);
  const double nn = std::sqrt(nn2);
  const Vec2 foot = (axis.offset / nn2) * axis.normal;
  const Vec2 dir = (1.0 / nn) * perp(axis.normal);

  const double h = r * r - norm2(foot);
  if (h < 0.0) return out;
  double lo = -std::sqrt(h);
  double hi = std::sqrt(h);

  for (std::size_t k : diagram.relevant_neighbors(i, r)) {
    if (k == j) continue;
    const HalfPlane hk = diagram.relative_halfplane(i, k);
    if (hk.is_nothing()) return out;
    if (hk.is_everything()) continue;
    const double a = dot(hk.normal, dir);
    const double b = hk.offset - dot(hk.normal, foot);
    const double scale = norm(hk.normal);
    if (std::abs(a) <= 1e-14 * scale) {
      if (b < -kAxisTol * scale) return out;
      continue;
    }
    if (a > 0.0) {
      hi = std::min(hi, b / a);
    } else {
      lo = std::max(lo, b / a);
    }
    if (hi < lo) return out;
  }
  const Vec2 base = diagram.config().center2(i) + foot;
  out.segment = LineSegment{base + lo * dir, base + hi * dir};
  out.length = hi - lo;
  return out;
}

// ---------------------------------------------------------------------------
// Measures

double region_area(const CircularPolygon& cp) {
  if (cp.boundary.empty()) return 0.0;
  const Vec2 ref = element_start(cp.boundary.front());
  double scale = 1.0;
  for (const auto& e : cp.boundary) {
    const Vec2 s = element_start(e) - ref;
    scale = std::max({scale, std::abs(s.x), std::abs(s.y)});
  }
  double twice = 0.0;
  for (std::size_t k = 0; k < cp.boundary.size(); ++k) {
    const auto& e = cp.boundary[k];
    const Vec2 next_start = element_start(cp.boundary[(k + 1) % cp.boundary.size()]);
    if (norm(element_end(e) - next_start) > 1e-10 * scale) {
      throw Error(ErrorKind::kInvalidInput, "boundary is not closed",
                  "boundary[" + std::to_string(k) + "]");
    }
    if (const auto* seg = std::get_if<LineSegment>(&e)) {
      twice += cross(seg->a - ref, seg->b - ref);
    } else {
      const auto& arc = std::get<CircularArc>(e);
      const Vec2 c = arc.center - ref;
      const double t0 = arc.start_angle;
      const double t1 = arc.end_angle();
      const double rr = arc.radius;
      twice += rr * c.x * (std::sin(t1) - std::sin(t0)) - rr * c.y * (std::cos(t1) - std::cos(t0)) +
               rr * rr * arc.sweep;
    }
  }
  return std::max(0.0, 0.5 * twice);
}

double boundary_arc_length(const CircularPolygon& cp, Vec2 center, double r) {
  double total = 0.0;
  const double tol = 1e-9 * std::max(1.0, r);
  for (const auto& e : cp.boundary) {
    if (const auto* arc = std::get_if<CircularArc>(&e)) {
      if (norm(arc->center - center) <= tol && std::abs(arc->radius - r) <= tol) {
        total += arc->length();
      }
    }
  }
  return total;
}

}  // namespace kp
