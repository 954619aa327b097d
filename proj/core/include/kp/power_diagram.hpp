#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "kp/config.hpp"
#include "kp/vec2.hpp"

namespace kp {

enum class CellVariant { kNearest, kFarthest };

std::string_view to_string(CellVariant variant);

/// Closed halfplane {x : normal . x <= offset}. A zero normal encodes either
/// the whole plane (offset >= 0) or the empty set (offset < 0).
struct HalfPlane {
  Vec2 normal;
  double offset = 0.0;
  std::size_t opposing = 0;  // index j whose radical axis bounds this halfplane

  bool contains(Vec2 x, double tol = 0.0) const { return dot(normal, x) <= offset + tol; }
  bool is_everything() const { return normal == Vec2{} && offset >= 0.0; }
  bool is_nothing() const { return normal == Vec2{} && offset < 0.0; }
};

struct LineSegment {
  Vec2 a;
  Vec2 b;
  double length() const { return norm(b - a); }
};

/// Counter-clockwise arc of the circle (center, radius) from start_angle
/// sweeping through `sweep` radians; sweep == 2*pi is the full circle.
struct CircularArc {
  Vec2 center;
  double radius = 0.0;
  double start_angle = 0.0;
  double sweep = 0.0;
  bool ccw = true;

  double end_angle() const { return start_angle + sweep; }
  Vec2 start() const;
  Vec2 end() const;
  double length() const { return radius * sweep; }
};

using BoundaryElement = std::variant<LineSegment, CircularArc>;

/// Convex region bounded by line segments and outward-bulging arcs, traversed
/// counter-clockwise. No elements means the empty region.
struct CircularPolygon {
  std::vector<BoundaryElement> boundary;
  bool convex = true;

  bool empty() const { return boundary.empty(); }
};

Vec2 element_start(const BoundaryElement& e);
Vec2 element_end(const BoundaryElement& e);

/// Extended nearest- or farthest-point power diagram of a planar configuration.
/// Cells are held implicitly as halfplane lists; only truncations are
/// materialized.
class PowerDiagram {
 public:
  PowerDiagram(Configuration config, CellVariant variant);

  CellVariant variant() const noexcept { return variant_; }
  const Configuration& config() const noexcept { return config_; }
  std::size_t size() const noexcept { return config_.size(); }

  /// All N-1 halfplanes of cell i, in index order of the opposing center.
  std::vector<HalfPlane> halfplanes(std::size_t i) const;

  /// The halfplane of cell i against j, in coordinates relative to p_i
  /// ({y : normal . y <= offset} with y = x - p_i).
  HalfPlane relative_halfplane(std::size_t i, std::size_t j) const;

  /// Indices j != i (ascending) whose halfplane can meet B(p_i, r); every
  /// other halfplane contains that disk.
  std::vector<std::size_t> relevant_neighbors(std::size_t i, double r) const;

  /// Power of x with respect to center i: |x - p_i|^2 - r_i^2.
  double power(std::size_t i, Vec2 x) const;

  /// Whether x lies in cell i (closed), with a tolerance on the power gap.
  bool cell_contains(std::size_t i, Vec2 x, double tol = 0.0) const;

 private:
  Configuration config_;
  CellVariant variant_;
  double max_radius_ = 0.0;
  // Uniform bucket grid over centers, used when N is large.
  double bucket_size_ = 0.0;
  Vec2 origin_;
  long nx_ = 0;
  long ny_ = 0;
  std::vector<std::vector<std::size_t>> buckets_;
};

PowerDiagram build_diagram(const Configuration& config, CellVariant variant);

/// cell_i intersected with B(p_i, r), as a circular polygon. Halfplanes are
/// clipped in index order and the disk last; the boundary starts at the
/// lexicographically smallest vertex.
CircularPolygon truncated_cell(const PowerDiagram& diagram, std::size_t i, double r);

struct Wall {
  std::size_t i = 0;
  std::size_t j = 0;
  std::optional<LineSegment> segment;
  double length = 0.0;
  /// Set when the radical axis of (i, j) does not exist (coincident centers).
  bool undefined_axis = false;
};

/// cell_i ∩ cell_j ∩ B(p_i, r): the radical axis of (i, j) clipped by the other
/// halfplanes of cell i and by the disk.
Wall wall(const PowerDiagram& diagram, std::size_t i, std::size_t j, double r);

/// Exact area by the boundary integral of (x dy - y dx)/2; throws when the
/// boundary is not closed.
double region_area(const CircularPolygon& cp);

/// Total length of the arcs of cp lying on the circle (center, r).
double boundary_arc_length(const CircularPolygon& cp, Vec2 center, double r);

struct SvgOptions {
  double margin = 0.25;
  double pixels_per_unit = 100.0;
  bool draw_cells = true;
  bool draw_walls = true;
};

/// Disks, truncated cells at r_i and nonempty walls; 9 significant digits,
/// fixed element order.
std::string diagram_svg(const PowerDiagram& diagram, const SvgOptions& options = {});

}  // namespace kp
