#include <cmath>
#include <numbers>

#include "doctest.h"
#include "generators.hpp"
#include "kp/area.hpp"
#include "kp/error.hpp"

using namespace kp;

namespace {

constexpr double kPi = std::numbers::pi;

// Independent lens area: integrate the chord length across the overlap.
double lens_by_slices(double d, double r1, double r2) {
  const double lo = std::max(-r1, d - r2);
  const double hi = std::min(r1, d + r2);
  if (hi <= lo) return 0.0;
  const int n = 200000;
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    const double x = lo + (hi - lo) * (k + 0.5) / n;
    const double a = std::sqrt(std::max(0.0, r1 * r1 - x * x));
    const double b = std::sqrt(std::max(0.0, r2 * r2 - (x - d) * (x - d)));
    sum += 2.0 * std::min(a, b);
  }
  return sum * (hi - lo) / n;
}

}  // namespace

TEST_CASE("single disk") {
  const Configuration c = Configuration::planar({{0.3, -1}}, {1.0});
  const AreaReport u = union_area(c);
  CHECK(u.total_area == doctest::Approx(kPi).epsilon(1e-12));
  CHECK(u.boundary_total == doctest::Approx(2 * kPi));
  CHECK(u.weighted_boundary == doctest::Approx(kPi));
  CHECK(intersection_area(c).total_area == doctest::Approx(kPi));
}

TEST_CASE("two unit disks at distance 1") {
  const Configuration c = Configuration::planar({{0, 0}, {1, 0}}, {1, 1});
  const double lens = 2 * kPi / 3 - std::sqrt(3.0) / 2;
  CHECK(union_area(c).total_area == doctest::Approx(2 * kPi - lens).epsilon(1e-12));
  CHECK(intersection_area(c).total_area == doctest::Approx(lens).epsilon(1e-12));
  CHECK(union_area(c).boundary_total == doctest::Approx(2 * (2 * kPi - 2 * kPi / 3)));
  CHECK(intersection_area(c).boundary_total == doctest::Approx(2 * (2 * kPi / 3)));
}

TEST_CASE("three pairwise tangent unit disks") {
  const double h = std::sqrt(3.0);
  const Configuration c = Configuration::planar({{0, 0}, {2, 0}, {1, h}}, {1, 1, 1});
  CHECK(union_area(c).total_area == doctest::Approx(3 * kPi).epsilon(1e-12));
  CHECK(intersection_area(c).total_area == doctest::Approx(0.0));
}

TEST_CASE("nested and disjoint disks") {
  const Configuration nested = Configuration::planar({{0, 0}, {0.2, 0.1}}, {2, 0.5});
  CHECK(union_area(nested).total_area == doctest::Approx(4 * kPi));
  CHECK(intersection_area(nested).total_area == doctest::Approx(0.25 * kPi));
  const Configuration apart = Configuration::planar({{0, 0}, {5, 0}}, {1, 2});
  CHECK(union_area(apart).total_area == doctest::Approx(5 * kPi));
  CHECK(intersection_area(apart).total_area == 0.0);
}

TEST_CASE("lens area matches slice integration") {
  for (auto [d, r1, r2] : {std::tuple{1.0, 1.0, 1.0}, std::tuple{0.3, 1.0, 0.5}, std::tuple{1.4, 0.8, 1.1},
                           std::tuple{3.0, 1.0, 1.0}, std::tuple{0.0, 1.0, 2.0}}) {
    CHECK(lens_area(d, r1, r2) == doctest::Approx(lens_by_slices(d, r1, r2)).epsilon(1e-8).scale(1.0));
  }
}

TEST_CASE("power-diagram areas agree with the arc oracle") {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const Configuration c = testing::random_config(2, 1 + seed % 9, seed);
    for (AreaMode mode : {AreaMode::kUnion, AreaMode::kIntersection}) {
      const AreaReport r = area_report(c, mode);
      const ArcMeasure a = arc_measure(c, mode);
      CHECK(r.total_area == doctest::Approx(a.area).epsilon(1e-10).scale(1.0));
      CHECK(r.boundary_total == doctest::Approx(a.perimeter).epsilon(1e-10).scale(1.0));
    }
  }
}

TEST_CASE("union area agrees with inclusion-exclusion for N <= 3") {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const Configuration c = testing::random_config(2, 1 + seed % 3, 1000 + seed);
    CHECK(union_area(c).total_area == doctest::Approx(inclusion_exclusion_area(c)).epsilon(1e-11).scale(1.0));
  }
  CHECK_THROWS_AS(inclusion_exclusion_area(testing::random_config(2, 4, 1)), Error);
}

TEST_CASE("Monte Carlo cross-check of the union area") {
  const Configuration c = testing::random_config(2, 5, 77);
  Rng rng(3);
  const int n = 400000;
  int hits = 0;
  for (int k = 0; k < n; ++k) {
    const double x = rng.uniform(-3.0, 3.0);
    const double y = rng.uniform(-3.0, 3.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      const double dx = x - c.center2(i).x;
      const double dy = y - c.center2(i).y;
      if (dx * dx + dy * dy <= c.radius(i) * c.radius(i)) {
        ++hits;
        break;
      }
    }
  }
  const double p = static_cast<double>(hits) / n;
  const double estimate = 36.0 * p;
  const double sigma = 36.0 * std::sqrt(p * (1 - p) / n);
  CHECK(std::abs(union_area(c).total_area - estimate) <= 4 * sigma);
}

TEST_CASE("planar Kneser-Poulsen on random pairs") {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    RandomPairOptions options;
    options.strategy = testing::strategy_for(seed);
    const ExpansionPair pair = random_expansion_pair(2, 2 + seed % 7, seed, options);
    CHECK(union_area(pair.q).total_area >= union_area(pair.p).total_area - 1e-9);
    CHECK(intersection_area(pair.q).total_area <= intersection_area(pair.p).total_area + 1e-9);
  }
}

TEST_CASE("area CSV") {
  CHECK(area_csv_header() == "mode,N,total_area,boundary_total,weighted_boundary");
  const AreaReport r = union_area(Configuration::planar({{0, 0}}, {1.0}));
  CHECK(area_csv_row(r).rfind("union,1,3.14159265", 0) == 0);
  CHECK(parse_area_mode("intersection") == AreaMode::kIntersection);
  CHECK_FALSE(parse_area_mode("sum").has_value());
}

TEST_CASE("intersection feasibility") {
  CHECK_FALSE(intersection_nonempty(Configuration::planar({{0, 0}, {3, 0}}, {1, 1})));
  CHECK(intersection_nonempty(Configuration::planar({{0, 0}, {2, 0}}, {1, 1})));  // tangent
  const Feasibility f = intersection_feasibility(Configuration::planar({{0, 0}, {4, 0}}, {1, 1}));
  CHECK(f.min_max_power == doctest::Approx(3.0));
  CHECK(f.witness[0] == doctest::Approx(2.0));
  // Three balls in E^3 whose common point is forced to the origin region.
  const Configuration c(3, {1, 0, 0, -1, 0, 0, 0, 1, 0}, {1.1, 1.1, 1.1});
  const Feasibility g = intersection_feasibility(c);
  REQUIRE(g.nonempty);
  for (std::size_t i = 0; i < c.size(); ++i) {
    double d2 = 0.0;
    for (int a = 0; a < 3; ++a) d2 += (g.witness[a] - c.center(i)[a]) * (g.witness[a] - c.center(i)[a]);
    CHECK(d2 <= 1.1 * 1.1 + 1e-9);
  }
}

TEST_CASE("feasibility minimax agrees with a brute-force search in the plane") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Configuration c = testing::random_config(2, 2 + seed % 4, 300 + seed);
    const Feasibility f = intersection_feasibility(c);
    double best = INFINITY;
    for (int a = -300; a <= 300; ++a) {
      for (int b = -300; b <= 300; ++b) {
        const double x = a * 0.01;
        const double y = b * 0.01;
        double worst = -INFINITY;
        for (std::size_t i = 0; i < c.size(); ++i) {
          const double dx = x - c.center2(i).x;
          const double dy = y - c.center2(i).y;
          worst = std::max(worst, dx * dx + dy * dy - c.radius(i) * c.radius(i));
        }
        best = std::min(best, worst);
      }
    }
    CHECK(f.min_max_power <= best + 1e-12);
    CHECK(f.min_max_power >= best - 0.05);
  }
}

TEST_CASE("Kirszbraun: contractions keep the intersection nonempty") {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const int dim = 1 + static_cast<int>(seed % 4);
    const ExpansionPair pair = testing::with_common_point(random_expansion_pair(dim, 2 + seed % 5, seed), 0.0);
    const KirszbraunVerdict v = kirszbraun_check(pair);
    CHECK(v.q_nonempty);
    CHECK(v.holds);
  }
}
