#include <cmath>
#include <numbers>

#include "doctest.h"
#include "generators.hpp"
#include "kp/dynamics.hpp"
#include "kp/error.hpp"

using namespace kp;

namespace {

// Two unit disks whose centers separate linearly: d(t) = 0.5 + t.
Motion separating_pair() {
  const Configuration p = Configuration::planar({{0, 0}, {0.5, 0}}, {1, 1});
  const Configuration q = Configuration::planar({{0, 0}, {1.5, 0}}, {1, 1});
  return linear_motion(p, q);
}

}  // namespace

TEST_CASE("wall formula for two separating unit disks") {
  // d/dd of the lens area is -sqrt(4 - d^2) for unit disks.
  const Motion m = separating_pair();
  for (double t : {0.1, 0.5, 0.9}) {
    const double d = 0.5 + t;
    const double rate = std::sqrt(4.0 - d * d);
    const DerivativeSample u = csikos_derivative(m, t, AreaMode::kUnion);
    CHECK(u.formula_value == doctest::Approx(rate).epsilon(1e-12));
    CHECK(u.fd_value == doctest::Approx(rate).epsilon(1e-8));
    REQUIRE(u.per_pair_terms.size() == 1);
    CHECK(u.per_pair_terms[0].rate == doctest::Approx(1.0));
    const DerivativeSample i = csikos_derivative(m, t, AreaMode::kIntersection);
    CHECK(i.formula_value == doctest::Approx(-rate).epsilon(1e-12));
  }
}

TEST_CASE("wall formula matches finite differences on random motions") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Motion m = random_smooth_motion(2 + seed % 5, seed);
    for (double t : {0.2, 0.55, 0.8}) {
      for (AreaMode mode : {AreaMode::kUnion, AreaMode::kIntersection}) {
        const DerivativeSample d = csikos_derivative(m, t, mode);
        CHECK(d.formula_value == doctest::Approx(d.fd_value).epsilon(1e-6).scale(1e-6));
      }
    }
  }
}

TEST_CASE("rigid motions leave the area unchanged") {
  const Configuration c = testing::random_config(2, 5, 4);
  const Motion m = rotation_motion(c, 1.3);
  const DerivativeSample d = csikos_derivative(m, 0.4, AreaMode::kUnion);
  CHECK(d.formula_value == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  const ScanReport s = monotonicity_scan(m, ScanQuantity::kUnionArea, uniform_grid(21), 1e-10);
  CHECK(s.nondecreasing);
  CHECK(s.nonincreasing);
}

TEST_CASE("coincident centers make the formula undefined") {
  const Configuration p = Configuration::planar({{-1, 0}, {1, 0}}, {1, 1});
  const Configuration q = Configuration::planar({{1, 0}, {-1, 0}}, {1, 1});
  const Motion m = linear_motion(p, q);
  try {
    csikos_derivative(m, 0.5, AreaMode::kUnion);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kDegenerate);
  }
}

TEST_CASE("lifted motions in four dimensions within Monte Carlo error") {
  // Five points: the lifted configuration leaves every 2-plane.
  const ExpansionPair pair = random_expansion_pair(2, 5, 21);
  const Motion m = lift_motion(pair.p, pair.q);
  CsikosOptions options;
  options.samples = 200000;
  options.seed = 3;
  const DerivativeSample d = csikos_derivative(m, 0.5, AreaMode::kUnion, options);
  CHECK(d.formula_std_error > 0.0);
  CHECK(d.fd_std_error > 0.0);
  CHECK(std::abs(d.formula_value - d.fd_value) <= 4.0 * std::hypot(d.formula_std_error, d.fd_std_error));
}

TEST_CASE("weighted boundary is the s-derivative of the area") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Configuration c = testing::random_config(2, 1 + seed % 6, 50 + seed);
    const WeightedBoundary w = dVds_weighted_boundary(c);
    const double h = 1e-5;
    auto area_at = [&](double s, AreaMode mode) {
      std::vector<double> radii;
      for (double r : c.radii()) radii.push_back(std::sqrt(r * r + s));
      return area_report(c.with_radii(radii), mode).total_area;
    };
    const double fu = (area_at(h, AreaMode::kUnion) - area_at(-h, AreaMode::kUnion)) / (2 * h);
    const double fi = (area_at(h, AreaMode::kIntersection) - area_at(-h, AreaMode::kIntersection)) / (2 * h);
    CHECK(w.union_value == doctest::Approx(fu).epsilon(1e-6).scale(1e-6));
    CHECK(w.intersection_value == doctest::Approx(fi).epsilon(1e-6).scale(1e-6));
    CHECK(w.union_std_error == 0.0);
  }
}

TEST_CASE("weighted boundary in three dimensions by sampling") {
  // Single ball: (1/2) K / r = 2 pi r for r = 1.
  const Configuration one(3, {0, 0, 0}, {1.0});
  const WeightedBoundary w = dVds_weighted_boundary(one, 10000, 1);
  CHECK(w.union_value == doctest::Approx(2 * std::numbers::pi).epsilon(1e-12));
}

TEST_CASE("weighted boundary is monotone along expanding motions") {
  const std::vector<double> grid = uniform_grid(101);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Motion m = random_expanding_motion(2 + seed % 5, seed);
    CHECK(distance_profile(m, grid).all_nondecreasing());
    CHECK(monotonicity_scan(m, ScanQuantity::kWeightedBoundaryUnion, grid, 1e-8).nondecreasing);
    CHECK(monotonicity_scan(m, ScanQuantity::kWeightedBoundaryIntersection, grid, 1e-8).nonincreasing);
    CHECK(monotonicity_scan(m, ScanQuantity::kUnionArea, grid, 1e-9).nondecreasing);
  }
}

TEST_CASE("scan report and CSV") {
  const ScanReport s = monotonicity_scan(separating_pair(), ScanQuantity::kIntersectionArea, uniform_grid(5));
  CHECK(s.nonincreasing);
  CHECK_FALSE(s.nondecreasing);
  REQUIRE(s.decrease_intervals.size() == 1);
  CHECK(s.decrease_intervals[0].t0 == 0.0);
  CHECK(s.decrease_intervals[0].t1 == 1.0);
  const std::string csv = scan_csv(s);
  CHECK(csv.rfind("t,quantity,value,verdict\n0,intersection_area,", 0) == 0);
  CHECK(csv.find("# summary quantity=intersection_area nondecreasing=false nonincreasing=true") != std::string::npos);
  CHECK(parse_scan_quantity("boundary_length") == ScanQuantity::kBoundaryLength);
}

TEST_CASE("uniform grid") {
  const std::vector<double> g = uniform_grid(5, 0.0, 1.0);
  REQUIRE(g.size() == 5);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == 1.0);
  CHECK(g[2] == 0.5);
}

TEST_CASE("s-derivatives of a two-disk wall") {
  // The chord half-length is sqrt(r^2 - a^2 + s) with a fixed, so for unit
  // disks at distance 1 the wall is 2 sqrt(3/4 + s).
  const Motion m = separating_pair();
  const double t = 0.5;
  const Remark3Report k1 = remark3_probe(m, 1, t, 1e-3, AreaMode::kUnion);
  REQUIRE(k1.terms.size() == 1);
  CHECK(k1.terms[0].value == doctest::Approx(1.0 / std::sqrt(0.75)).epsilon(1e-5));
  CHECK(k1.terms[0].sign == 1);
  const Remark3Report k2 = remark3_probe(m, 2, t, 1e-3, AreaMode::kUnion);
  CHECK(k2.terms[0].value == doctest::Approx(-0.5 * std::pow(0.75, -1.5)).epsilon(1e-4));
  CHECK(k2.terms[0].sign == -1);
  CHECK_THROWS_AS(remark3_probe(m, 1, t, 0.5, AreaMode::kUnion), Error);
  CHECK_THROWS_AS(remark3_probe(m, 4, t, 1e-3, AreaMode::kUnion), Error);
}
