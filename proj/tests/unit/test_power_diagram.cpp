#include <cmath>
#include <numbers>

#include "doctest.h"
#include "generators.hpp"
#include "kp/area.hpp"
#include "kp/power_diagram.hpp"

using namespace kp;

namespace {

constexpr double kPi = std::numbers::pi;

double wall_len(const Configuration& c, CellVariant v, std::size_t i, std::size_t j) {
  const PowerDiagram d = build_diagram(c, v);
  return wall(d, i, j, c.radius(i)).length;
}

}  // namespace

TEST_CASE("two unit disks at distance 1: wall is the common chord") {
  const Configuration c = Configuration::planar({{0, 0}, {1, 0}}, {1, 1});
  CHECK(wall_len(c, CellVariant::kNearest, 0, 1) == doctest::Approx(std::sqrt(3.0)));
  CHECK(wall_len(c, CellVariant::kFarthest, 0, 1) == doctest::Approx(std::sqrt(3.0)));
  const PowerDiagram d = build_diagram(c, CellVariant::kNearest);
  const Wall w = wall(d, 0, 1, 1.0);
  REQUIRE(w.segment);
  CHECK(w.segment->a.x == doctest::Approx(0.5));
  CHECK(w.segment->b.x == doctest::Approx(0.5));
}

TEST_CASE("walls lie on the radical axis") {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const Configuration c = testing::random_config(2, 2 + seed % 5, seed);
    const PowerDiagram d = build_diagram(c, CellVariant::kNearest);
    for (std::size_t i = 0; i < c.size(); ++i) {
      for (std::size_t j = 0; j < c.size(); ++j) {
        if (i == j) continue;
        const Wall w = wall(d, i, j, c.radius(i));
        if (!w.segment) continue;
        for (Vec2 x : {w.segment->a, w.segment->b}) {
          CHECK(d.power(i, x) == doctest::Approx(d.power(j, x)).epsilon(1e-9).scale(1.0));
          CHECK(d.power(i, x) <= 1e-9);  // inside disk i
        }
      }
    }
  }
}

TEST_CASE("wall is symmetric in i and j when both disks reach it") {
  const Configuration c = Configuration::planar({{0, 0}, {1.2, 0.3}, {0.4, 1.1}}, {1.0, 0.9, 0.8});
  const PowerDiagram d = build_diagram(c, CellVariant::kNearest);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = i + 1; j < 3; ++j) {
      // On the radical axis both disks cut the same chord.
      CHECK(wall(d, i, j, c.radius(i)).length == doctest::Approx(wall(d, j, i, c.radius(j)).length));
    }
  }
}

TEST_CASE("truncated cells tile the union and the intersection") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const Configuration c = testing::random_config(2, 1 + seed % 8, 100 + seed);
    for (CellVariant v : {CellVariant::kNearest, CellVariant::kFarthest}) {
      const PowerDiagram d = build_diagram(c, v);
      double total = 0.0;
      for (std::size_t i = 0; i < c.size(); ++i) {
        const CircularPolygon cell = truncated_cell(d, i, c.radius(i));
        if (!cell.empty()) total += region_area(cell);
      }
      const AreaMode mode = v == CellVariant::kNearest ? AreaMode::kUnion : AreaMode::kIntersection;
      CHECK(total == doctest::Approx(arc_measure(c, mode).area).epsilon(1e-10).scale(1.0));
    }
  }
}

TEST_CASE("cell membership agrees with brute-force minimum power") {
  const Configuration c = testing::random_config(2, 6, 7);
  const PowerDiagram d = build_diagram(c, CellVariant::kNearest);
  Rng rng(11);
  for (int k = 0; k < 2000; ++k) {
    const Vec2 x{rng.uniform(-3, 3), rng.uniform(-3, 3)};
    std::size_t best = 0;
    double best_power = INFINITY;
    for (std::size_t i = 0; i < c.size(); ++i) {
      const double dx = x.x - c.center2(i).x;
      const double dy = x.y - c.center2(i).y;
      const double pw = dx * dx + dy * dy - c.radius(i) * c.radius(i);
      if (pw < best_power) {
        best_power = pw;
        best = i;
      }
    }
    CHECK(d.cell_contains(best, x, 1e-12));
  }
}

TEST_CASE("relevant neighbors agree with and without the bucket grid") {
  // Above the bucket threshold: every halfplane not reported must contain the disk.
  const Configuration c = testing::random_config(2, 150, 5, 8.0, 0.3, 1.0);
  const PowerDiagram d = build_diagram(c, CellVariant::kNearest);
  for (std::size_t i = 0; i < c.size(); i += 7) {
    const std::vector<std::size_t> rel = d.relevant_neighbors(i, c.radius(i));
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (j == i || std::binary_search(rel.begin(), rel.end(), j)) continue;
      const HalfPlane h = d.relative_halfplane(i, j);
      CHECK(h.offset >= c.radius(i) * norm(h.normal) - 1e-9);
    }
  }
}

TEST_CASE("coincident centers") {
  SUBCASE("equal radii: the lower index owns the disk") {
    const Configuration c = Configuration::planar({{0, 0}, {0, 0}}, {1, 1});
    const PowerDiagram d = build_diagram(c, CellVariant::kNearest);
    CHECK(region_area(truncated_cell(d, 0, 1.0)) == doctest::Approx(kPi));
    CHECK(truncated_cell(d, 1, 1.0).empty());
    CHECK(wall(d, 0, 1, 1.0).undefined_axis);
    CHECK(union_area(c).total_area == doctest::Approx(kPi));
    CHECK(intersection_area(c).total_area == doctest::Approx(kPi));
  }
  SUBCASE("unequal radii") {
    const Configuration c = Configuration::planar({{0, 0}, {0, 0}}, {1, 2});
    CHECK(union_area(c).total_area == doctest::Approx(4 * kPi));
    CHECK(intersection_area(c).total_area == doctest::Approx(kPi));
  }
}

TEST_CASE("radical axes are unchanged by the radius deformation") {
  const Configuration c = testing::random_config(2, 5, 3);
  const PowerDiagram d0 = build_diagram(c, CellVariant::kNearest);
  for (double s : {0.5, 1.0}) {
    std::vector<double> radii;
    for (double r : c.radii()) radii.push_back(std::sqrt(r * r + s));
    const PowerDiagram ds = build_diagram(c.with_radii(radii), CellVariant::kNearest);
    for (std::size_t i = 0; i < c.size(); ++i) {
      for (std::size_t j = 0; j < c.size(); ++j) {
        if (i == j) continue;
        const HalfPlane a = d0.relative_halfplane(i, j);
        const HalfPlane b = ds.relative_halfplane(i, j);
        CHECK(a.normal.x == doctest::Approx(b.normal.x));
        CHECK(a.normal.y == doctest::Approx(b.normal.y));
        CHECK(a.offset == doctest::Approx(b.offset));
      }
    }
  }
}

TEST_CASE("svg output is deterministic") {
  const Configuration c = Configuration::planar({{0, 0}, {1, 0}, {0.5, 0.8}}, {1, 1, 0.7});
  const PowerDiagram d = build_diagram(c, CellVariant::kNearest);
  const std::string a = diagram_svg(d);
  CHECK(a == diagram_svg(d));
  CHECK(a.rfind("<svg", 0) == 0);
  CHECK(a.find("<circle") != std::string::npos);
  CHECK(a.find("</svg>") != std::string::npos);
}
