// Runs every acceptance criterion once and prints one PASS/FAIL line each.
// Exit status is nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "generators.hpp"
#include "kp/area.hpp"
#include "kp/config.hpp"
#include "kp/dynamics.hpp"
#include "kp/error.hpp"
#include "kp/highdim.hpp"
#include "kp/power_diagram.hpp"
#include "kp/scenarios.hpp"

namespace {

using namespace kp;
using Clock = std::chrono::steady_clock;
constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// The planar pairs shared by the Kneser-Poulsen and hull-perimeter criteria.
std::vector<ExpansionPair> planar_pairs() {
  std::vector<ExpansionPair> pairs;
  for (std::size_t k = 0; k < 1000; ++k) {
    RandomPairOptions options;
    options.strategy = testing::strategy_for(k);
    pairs.push_back(random_expansion_pair(2, 2 + k % 7, 10000 + k, options));
  }
  return pairs;
}

Outcome exact_area_oracle() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (std::size_t k = 0; k < 500; ++k) {
    const Configuration c = testing::random_config(2, 1 + k % 3, 500 + k);
    worst = std::max(worst, std::abs(union_area(c).total_area - inclusion_exclusion_area(c)));
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-9 && secs < 10.0,
          fmt("500 configs, max |diff| = %.3e (<= 1e-9), %.2f s (< 10 s)", worst, secs)};
}

Outcome planar_kneser_poulsen(const std::vector<ExpansionPair>& pairs) {
  const auto t0 = Clock::now();
  std::size_t certified = 0;
  std::size_t bad = 0;
  double worst_union = 0.0;
  double worst_inter = 0.0;
  for (const ExpansionPair& pair : pairs) {
    if (is_expansion(pair.p, pair.q, 0.0).is_expansion) ++certified;
    const double du = union_area(pair.q).total_area - union_area(pair.p).total_area;
    const double di = intersection_area(pair.p).total_area - intersection_area(pair.q).total_area;
    worst_union = std::min(worst_union, du);
    worst_inter = std::min(worst_inter, di);
    if (du < -1e-9 || di < -1e-9) ++bad;
  }
  const double secs = seconds_since(t0);
  return {certified == pairs.size() && bad == 0 && secs < 60.0,
          fmt("%zu/%zu certified, %zu violations, worst union %.3e, worst intersection %.3e, %.2f s (< 60 s)",
              certified, pairs.size(), bad, worst_union, worst_inter, secs)};
}

Outcome csikos_formula() {
  const auto t0 = Clock::now();
  double worst_rel = 0.0;
  std::size_t planar_fail = 0;
  std::size_t planar_checks = 0;
  for (std::size_t m = 0; m < 100; ++m) {
    const Motion motion = random_smooth_motion(2 + m % 5, 2000 + m);
    for (int s = 0; s < 20; ++s) {
      const double t = (s + 0.5) / 20.0;
      for (AreaMode mode : {AreaMode::kUnion, AreaMode::kIntersection}) {
        const DerivativeSample d = csikos_derivative(motion, t, mode);
        const double diff = std::abs(d.formula_value - d.fd_value);
        const double scale = std::max(std::abs(d.formula_value), std::abs(d.fd_value));
        // Both sides vanish identically when the region is empty or static.
        const double rel = scale > 1e-12 ? diff / scale : 0.0;
        worst_rel = std::max(worst_rel, rel);
        ++planar_checks;
        if (rel > 1e-6 && diff > 1e-12) ++planar_fail;
      }
    }
  }
  double worst_sigma = 0.0;
  std::size_t lifted_fail = 0;
  for (std::size_t m = 0; m < 10; ++m) {
    const ExpansionPair pair = random_expansion_pair(2, 3 + m % 3, 3000 + m);
    const Motion motion = lift_motion(pair.p, pair.q);
    CsikosOptions options;
    options.samples = 400000;
    options.seed = 77 + m;
    for (AreaMode mode : {AreaMode::kUnion, AreaMode::kIntersection}) {
      const DerivativeSample d = csikos_derivative(motion, 0.5, mode, options);
      const double sigma = std::hypot(d.formula_std_error, d.fd_std_error);
      const double z = sigma > 0.0 ? std::abs(d.formula_value - d.fd_value) / sigma
                                   : (d.formula_value == d.fd_value ? 0.0 : INFINITY);
      worst_sigma = std::max(worst_sigma, z);
      if (z > 3.0) ++lifted_fail;
    }
  }
  const double secs = seconds_since(t0);
  return {planar_fail == 0 && lifted_fail == 0 && secs < 300.0,
          fmt("planar %zu checks, %zu above 1e-6 (worst rel %.3e); 4D 20 checks, %zu beyond 3 sigma "
              "(worst %.2f); %.1f s (< 300 s)",
              planar_checks, planar_fail, worst_rel, lifted_fail, worst_sigma, secs)};
}

Outcome lift_motion_identity() {
  double worst = 0.0;
  std::size_t non_monotone = 0;
  const std::vector<double> grid = uniform_grid(101);
  for (std::size_t k = 0; k < 200; ++k) {
    RandomPairOptions options;
    options.strategy = testing::strategy_for(k);
    const int dim = 2 + static_cast<int>(k % 2);
    const ExpansionPair pair = random_expansion_pair(dim, 2 + k % 7, 4000 + k, options);
    const Motion motion = lift_motion(pair.p, pair.q);
    for (double t : grid) {
      const Configuration c = motion.at(t);
      for (std::size_t i = 0; i < c.size(); ++i) {
        for (std::size_t j = i + 1; j < c.size(); ++j) {
          // The three-term expression cancels badly when p_i and p_j nearly
          // coincide, so it is evaluated in extended precision.
          long double dp = 0.0L;
          long double dq = 0.0L;
          long double sum2 = 0.0L;
          long double diff2 = 0.0L;
          for (int a = 0; a < dim; ++a) {
            const long double u = static_cast<long double>(pair.p.center(i)[a]) - pair.p.center(j)[a];
            const long double v = static_cast<long double>(pair.q.center(i)[a]) - pair.q.center(j)[a];
            dp += u * u;
            dq += v * v;
            sum2 += (u + v) * (u + v);
            diff2 += (u - v) * (u - v);
          }
          const long double cosine = std::cos(std::numbers::pi_v<long double> * static_cast<long double>(t));
          const double expected = static_cast<double>(sum2 + diff2 + 2.0L * cosine * (dp - dq));
          const double got = 4.0 * c.distance2(i, j);
          worst = std::max(worst, std::abs(got - expected) / std::max(expected, 1e-300));
        }
      }
    }
    if (!distance_profile(motion, grid).all_nondecreasing()) ++non_monotone;
  }
  return {worst <= 1e-12 && non_monotone == 0,
          fmt("200 pairs, worst relative identity error %.3e (<= 1e-12), %zu non-monotone profiles", worst,
              non_monotone)};
}

Outcome lifted_volume_checks() {
  // Single ball: the lifted volume is the 4-ball volume pi^2 r(s)^4 / 2.
  double worst_single = 0.0;
  for (double r : {0.5, 1.0, 1.7}) {
    const PowerDiagram d = build_diagram(Configuration::planar({{0.3, -0.2}}, {r}), CellVariant::kNearest);
    for (double s : {0.0, 0.25, 1.0}) {
      const double rs2 = r * r + s;
      const double expected = kPi * kPi * rs2 * rs2 / 2.0;
      worst_single = std::max(worst_single, std::abs(lifted_volume(d, s) - expected) / expected);
    }
  }
  const Configuration two = Configuration::planar({{0.0, 0.0}, {1.0, 0.0}}, {1.0, 1.0});
  const Lemma7Report report = lemma7_check(two, {0.0, 0.5}, 1e-3, 1000000, 5);
  double worst_fd = 0.0;
  double worst_sigma = 0.0;
  for (const Lemma7Row& row : report.rows) {
    worst_fd = std::max(worst_fd, row.rel_error);
    worst_sigma = std::max(worst_sigma, row.mc_sigma);
  }
  return {worst_single <= 1e-8 && worst_fd <= 1e-4 && worst_sigma <= 3.0,
          fmt("single ball rel %.3e (<= 1e-8); two disks d=1: FD vs pi*area rel %.3e (<= 1e-4), "
              "MC %.2f sigma (<= 3) at 1e6 samples",
              worst_single, worst_fd, worst_sigma)};
}

Outcome weighted_boundary_monotone() {
  const std::vector<double> grid = uniform_grid(201);
  std::size_t bad_union = 0;
  std::size_t bad_inter = 0;
  double worst_drop = 0.0;
  double worst_rise = 0.0;
  for (std::size_t m = 0; m < 100; ++m) {
    const Motion motion = random_expanding_motion(2 + m % 5, 6000 + m);
    const ScanReport u = monotonicity_scan(motion, ScanQuantity::kWeightedBoundaryUnion, grid, 1e-8);
    const ScanReport i = monotonicity_scan(motion, ScanQuantity::kWeightedBoundaryIntersection, grid, 1e-8);
    if (!u.nondecreasing) ++bad_union;
    if (!i.nonincreasing) ++bad_inter;
    worst_drop = std::max(worst_drop, u.max_drop);
    worst_rise = std::max(worst_rise, i.max_rise);
  }
  return {bad_union == 0 && bad_inter == 0,
          fmt("100 motions x 201 points: union %zu failures (max drop %.3e), intersection %zu failures "
              "(max rise %.3e), tol 1e-8",
              bad_union, worst_drop, bad_inter, worst_rise)};
}

Outcome habicht_kneser_ratio() {
  const auto t0 = Clock::now();
  const ScenarioResult r = habicht_kneser(400);
  const double ratio = r.metrics.at("boundary_ratio");
  const double rel = std::abs(ratio / (kPi / 2.0) - 1.0);
  return {rel <= 0.05 && r.passed(),
          fmt("k=400, %g disks: ratio %.6f vs pi/2 (rel %.4f <= 0.05); expansion %s, union areas %.4f -> %.4f; "
              "%.1f s",
              r.metrics.at("disks"), ratio, rel, r.verdicts.at("expansion") ? "certified" : "NOT certified",
              r.metrics.at("area_p"), r.metrics.at("area_q"), seconds_since(t0))};
}

Outcome bern() {
  const ScenarioResult r = bern_example();
  return {r.passed() && r.verdicts.count("boundary_decrease_found") && r.verdicts.at("expanding") &&
              r.verdicts.at("weighted_nondecreasing"),
          fmt("min pair rate %.3e (>= -1e-12), length drops %.3e on t in [%.4f, %.4f], weighted max drop %.3e",
              r.metrics.at("min_pair_rate"), r.metrics.at("decrease_amount"), r.metrics.at("decrease_t0"),
              r.metrics.at("decrease_t1"), r.metrics.at("weighted_max_drop"))};
}

Outcome kirszbraun() {
  std::size_t failures = 0;
  std::size_t q_empty = 0;
  for (std::size_t k = 0; k < 1000; ++k) {
    RandomPairOptions options;
    options.strategy = testing::strategy_for(k);
    const int dim = 1 + static_cast<int>(k % 4);
    const ExpansionPair raw = random_expansion_pair(dim, 2 + k % 5, 8000 + k, options);
    // Every fifth pair is made exactly tangent-feasible.
    const double slack = k % 5 == 0 ? 0.0 : 0.5 * static_cast<double>(k % 7) / 7.0;
    const KirszbraunVerdict v = kirszbraun_check(testing::with_common_point(raw, slack), kFeasibilityTol);
    if (!v.q_nonempty) ++q_empty;
    if (!v.holds || !v.p_nonempty) ++failures;
  }
  return {failures == 0 && q_empty == 0,
          fmt("1000 contractions (dim 1-4, N 2-6): %zu with empty p, %zu with empty q, tol 1e-9", failures, q_empty)};
}

Outcome hull_perimeter_growth(const std::vector<ExpansionPair>& pairs) {
  std::size_t bad = 0;
  double worst = 0.0;
  for (const ExpansionPair& pair : pairs) {
    const double margin = hull_perimeter(pair.q) - hull_perimeter(pair.p);
    worst = std::min(worst, margin);
    if (margin < -1e-9) ++bad;
  }
  return {bad == 0, fmt("%zu pairs, %zu violations, worst margin %.3e (>= -1e-9)", pairs.size(), bad, worst)};
}

}  // namespace

int main() {
  const std::vector<ExpansionPair> pairs = planar_pairs();
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"exact-area oracle equivalence", exact_area_oracle},
      {"planar Kneser-Poulsen", [&] { return planar_kneser_poulsen(pairs); }},
      {"wall formula for dV/dt", csikos_formula},
      {"lifted motion", lift_motion_identity},
      {"lifted volumes", lifted_volume_checks},
      {"weighted boundary monotonicity", weighted_boundary_monotone},
      {"Habicht-Kneser ratio", habicht_kneser_ratio},
      {"Bern example", bern},
      {"Kirszbraun nonemptiness", kirszbraun},
      {"hull perimeter", [&] { return hull_perimeter_growth(pairs); }},
  };
  int failed = 0;
  for (std::size_t n = 0; n < criteria.size(); ++n) {
    Outcome o;
    try {
      o = criteria[n].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s [%zu] %s: %s\n", o.pass ? "PASS" : "FAIL", n + 1, criteria[n].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
