#include "kp/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "kp/area.hpp"
#include "kp/dynamics.hpp"
#include "kp/error.hpp"
#include "kp/highdim.hpp"
#include "kp/random.hpp"

namespace kp {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

bool ScenarioResult::passed() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const auto& kv) { return kv.second; });
}

// ---------------------------------------------------------------------------

ScenarioResult habicht_kneser(int k, const HabichtKneserOptions& options) {
  if (k < 8) throw Error(ErrorKind::kInvalidInput, "k must be at least 8", "k");
  if (!(options.inner_fill > 0.0 && options.inner_fill < 1.0)) {
    throw Error(ErrorKind::kInvalidInput, "inner_fill must lie in (0, 1)", "inner_fill");
  }
  if (!(options.rim_overlap > 0.0 && options.rim_overlap < 0.5)) {
    throw Error(ErrorKind::kInvalidInput, "rim_overlap must lie in (0, 0.5)", "rim_overlap");
  }
  if (options.ring_density < 2 || options.ring_density % 2 != 0) {
    throw Error(ErrorKind::kInvalidInput, "ring_density must be even and at least 2", "ring_density");
  }

  const double half_gap = kPi / k;
  const double chord = 2.0 * (1.0 - options.rim_overlap);
  const double rim = 0.5 * chord / std::sin(half_gap);
  // Depth of the lens between adjacent rim disks, measured from its chord.
  const double lens = std::sqrt(1.0 - 0.25 * chord * chord);
  // Inner ring: the disk on each gap bisector reaches halfway into the lens.
  const double inner = rim * std::cos(half_gap) - 1.0 + 0.5 * lens;
  const double outer = 2.0 * rim - inner;

  std::vector<Vec2> p_centers;
  std::vector<Vec2> q_centers;
  for (int m = 0; m < k; ++m) {
    const Vec2 c = polar(rim, 2.0 * half_gap * m);
    p_centers.push_back(c);
    q_centers.push_back(c);
  }
  const int density = options.ring_density;
  std::size_t moved = 0;
  for (int m = 0; m < k; ++m) {
    for (int n = 0; n < density; ++n) {
      const double angle = 2.0 * half_gap * (m + static_cast<double>(n) / density);
      p_centers.push_back(polar(inner, angle));
      if (n % 2 == 1) {
        q_centers.push_back(polar(outer, angle));
        ++moved;
      } else {
        q_centers.push_back(polar(inner, angle));
      }
    }
  }
  const double spacing = std::sqrt(2.0) * options.inner_fill;
  // Any unit disk centered within `inner` stays inside the rim's inner envelope.
  const double reach = inner;
  const int steps = static_cast<int>(std::floor(reach / spacing));
  for (int a = -steps; a <= steps; ++a) {
    for (int b = -steps; b <= steps; ++b) {
      const Vec2 c{a * spacing, b * spacing};
      if (norm(c) > reach) continue;
      p_centers.push_back(c);
      q_centers.push_back(c);
    }
  }

  std::vector<double> radii(p_centers.size(), 1.0);
  ExpansionPair pair{Configuration::planar(p_centers, radii), Configuration::planar(q_centers, radii)};
  const ExpansionCheck check = is_expansion(pair.p, pair.q, 0.0);
  if (!check.is_expansion) {
    const PairViolation& v = check.violations.front();
    throw Error(ErrorKind::kConstruction,
                "constructed pair is not an expansion: pair (" + std::to_string(v.i) + ", " +
                    std::to_string(v.j) + ") shrinks by " + fmt(v.deficit),
                "k");
  }

  const AreaReport up = union_area(pair.p);
  const AreaReport uq = union_area(pair.q);
  ScenarioResult out;
  out.name = "habicht-kneser";
  out.inputs = {{"k", std::to_string(k)},
                {"inner_fill", fmt(options.inner_fill)},
                {"rim_overlap", fmt(options.rim_overlap)},
                {"ring_density", std::to_string(density)}};
  const double longer = std::max(up.boundary_total, uq.boundary_total);
  const double shorter = std::min(up.boundary_total, uq.boundary_total);
  out.metrics = {{"disks", static_cast<double>(p_centers.size())},
                 {"moved_disks", static_cast<double>(moved)},
                 {"rim_radius", rim},
                 {"boundary_p", up.boundary_total},
                 {"boundary_q", uq.boundary_total},
                 {"boundary_ratio", shorter > 0.0 ? longer / shorter : 0.0},
                 {"boundary_ratio_q_over_p", up.boundary_total > 0.0 ? uq.boundary_total / up.boundary_total : 0.0},
                 {"limit_ratio", kPi / 2.0},
                 {"area_p", up.total_area},
                 {"area_q", uq.total_area}};
  out.metrics["ratio_rel_to_limit"] = std::abs(out.metrics["boundary_ratio"] / (kPi / 2.0) - 1.0);
  out.verdicts = {{"expansion", true},
                  {"areas_ordered", uq.total_area >= up.total_area - 1e-9},
                  {"ratio_above_one", out.metrics["boundary_ratio"] > 1.0}};
  out.pair = std::move(pair);
  return out;
}

// ---------------------------------------------------------------------------

ScenarioResult bern_example(const BernOptions& options) {
  const double rho = options.radius_ratio;
  const double gap = options.gap;
  if (!(rho > 0.0 && rho < 1.0)) {
    throw Error(ErrorKind::kInvalidInput, "radius_ratio must lie in (0, 1)", "radius_ratio");
  }
  if (!(gap > 0.0 && gap < 2.0)) throw Error(ErrorKind::kInvalidInput, "gap must lie in (0, 2)", "gap");
  if (options.grid < 3) throw Error(ErrorKind::kInvalidInput, "grid needs at least 3 points", "grid");

  // The large circles meet on the bisector at height `notch`. The length drops
  // just after the small circle's top passes that corner, over a rise of
  // roughly gap^2 / 8, so the window straddles the crossing by gap^2 / 4.
  const double notch = std::sqrt(1.0 - 0.25 * gap * gap);
  const double touch = notch - rho;
  if (!(touch > 0.0)) {
    throw Error(ErrorKind::kConstruction,
                "small disk does not fit under the notch; lower radius_ratio or gap", "radius_ratio");
  }
  const double window = 0.25 * gap * gap;
  const double y0 = options.rigid ? touch : std::max(0.0, touch - window);
  const double y1 = options.rigid ? touch : touch + window;
  const double half = 0.5 * gap;
  MotionSegment seg;
  seg.position = [=](double t) {
    return std::vector<double>{-half, 0.0, half, 0.0, 0.0, y0 + (y1 - y0) * t};
  };
  seg.velocity = [=](double) { return std::vector<double>{0.0, 0.0, 0.0, 0.0, 0.0, y1 - y0}; };
  Motion motion(2, {1.0, 1.0, rho}, {seg});

  const std::vector<double> grid = uniform_grid(options.grid);
  double min_rate = std::numeric_limits<double>::infinity();
  for (double t : grid) {
    const Configuration c = motion.at(t);
    const std::vector<double> v = motion_velocity(motion, t);
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = i + 1; j < 3; ++j) {
        const auto pi = c.center(i);
        const auto pj = c.center(j);
        const double dot = (pi[0] - pj[0]) * (v[2 * i] - v[2 * j]) + (pi[1] - pj[1]) * (v[2 * i + 1] - v[2 * j + 1]);
        min_rate = std::min(min_rate, dot / c.distance(i, j));
      }
    }
  }
  const ScanReport length = monotonicity_scan(motion, ScanQuantity::kBoundaryLength, grid, 1e-12);
  const ScanReport weighted = monotonicity_scan(motion, ScanQuantity::kWeightedBoundaryUnion, grid, 1e-10);

  ScenarioResult out;
  out.name = "bern";
  out.inputs = {{"radius_ratio", fmt(rho)},
                {"gap", fmt(gap)},
                {"rigid", options.rigid ? "true" : "false"},
                {"grid", std::to_string(options.grid)}};
  out.metrics = {{"y_start", y0},
                 {"y_end", y1},
                 {"min_pair_rate", min_rate},
                 {"boundary_max_drop", length.max_drop},
                 {"boundary_start", length.values.front()},
                 {"boundary_end", length.values.back()},
                 {"weighted_max_drop", weighted.max_drop},
                 {"decrease_intervals", static_cast<double>(length.decrease_intervals.size())}};
  if (!length.decrease_intervals.empty()) {
    // Report the interval with the largest total drop.
    double best = -1.0;
    for (const Interval& iv : length.decrease_intervals) {
      const auto a = static_cast<std::size_t>(std::lower_bound(grid.begin(), grid.end(), iv.t0) - grid.begin());
      const auto b = static_cast<std::size_t>(std::lower_bound(grid.begin(), grid.end(), iv.t1) - grid.begin());
      const double drop = length.values[a] - length.values[b];
      if (drop > best) {
        best = drop;
        out.metrics["decrease_t0"] = iv.t0;
        out.metrics["decrease_t1"] = iv.t1;
        out.metrics["decrease_amount"] = drop;
      }
    }
  }
  out.traces = {{"t", grid}, {"boundary_length", length.values}, {"weighted_boundary_union", weighted.values}};
  out.verdicts["expanding"] = min_rate >= -1e-12;
  out.verdicts["weighted_nondecreasing"] = weighted.nondecreasing;
  if (options.rigid) {
    out.verdicts["boundary_constant"] = length.max_drop <= 1e-12 && length.max_rise <= 1e-12;
  } else {
    if (length.decrease_intervals.empty()) {
      throw Error(ErrorKind::kConstruction,
                  "no interval of decreasing boundary length; widen the gap or the grid", "gap");
    }
    out.verdicts["boundary_decrease_found"] = true;
  }
  out.motion = std::move(motion);
  return out;
}

// ---------------------------------------------------------------------------

ScenarioResult verify_pair(const ExpansionPair& pair, const VerifyOptions& options) {
  const Configuration& p = pair.p;
  const Configuration& q = pair.q;
  if (p.dim() != q.dim()) throw Error(ErrorKind::kMismatch, "dimensions differ", "dim");
  if (p.size() != q.size()) throw Error(ErrorKind::kMismatch, "point counts differ", "centers");
  if (p.radii() != q.radii()) throw Error(ErrorKind::kMismatch, "radii differ", "radii");

  ScenarioResult out;
  out.name = "verify-pair";
  out.inputs = {{"method", options.method == VerifyMethod::kExact2d ? "exact2d" : "mc"},
                {"tol", fmt(options.tol)},
                {"samples", std::to_string(options.samples)},
                {"seed", std::to_string(options.seed)}};
  const ExpansionCheck check = is_expansion(p, q);
  out.metrics["expansion_violations"] = static_cast<double>(check.violations.size());
  out.verdicts["expansion"] = check.is_expansion;

  if (options.method == VerifyMethod::kExact2d) {
    if (p.dim() != 2) throw Error(ErrorKind::kInvalidInput, "exact2d needs planar pairs", "dim");
    const AreaReport up = union_area(p);
    const AreaReport uq = union_area(q);
    const AreaReport ip = intersection_area(p);
    const AreaReport iq = intersection_area(q);
    out.metrics["union_p"] = up.total_area;
    out.metrics["union_q"] = uq.total_area;
    out.metrics["intersection_p"] = ip.total_area;
    out.metrics["intersection_q"] = iq.total_area;
    out.metrics["union_margin"] = uq.total_area - up.total_area;
    out.metrics["intersection_margin"] = ip.total_area - iq.total_area;
    out.verdicts["union_ordered"] = uq.total_area >= up.total_area - options.tol;
    out.verdicts["intersection_ordered"] = iq.total_area <= ip.total_area + options.tol;
  } else {
    std::uint64_t stream = 0;
    for (AreaMode mode : {AreaMode::kUnion, AreaMode::kIntersection}) {
      const std::string name(to_string(mode));
      const McEstimate vp = mc_volume(p, mode, options.samples, stream_seed(options.seed, stream++));
      const McEstimate vq = mc_volume(q, mode, options.samples, stream_seed(options.seed, stream++));
      const McEstimate delta = mc_volume_delta(p, q, mode, options.samples, stream_seed(options.seed, stream++));
      out.metrics[name + "_p"] = vp.value;
      out.metrics[name + "_q"] = vq.value;
      out.metrics[name + "_p_std_error"] = vp.std_error;
      out.metrics[name + "_q_std_error"] = vq.std_error;
      out.metrics[name + "_delta"] = delta.value;
      out.metrics[name + "_delta_std_error"] = delta.std_error;
      const double slack = 3.0 * delta.std_error + options.tol;
      if (mode == AreaMode::kUnion) {
        out.verdicts["union_ordered"] = delta.value >= -slack;
      } else {
        out.verdicts["intersection_ordered"] = delta.value <= slack;
      }
    }
  }
  out.pair = pair;
  return out;
}

// ---------------------------------------------------------------------------

std::optional<Configuration> planar_projection(const Configuration& config, double rel_tol) {
  const auto dim = static_cast<std::size_t>(config.dim());
  const std::size_t n = config.size();
  std::vector<double> centroid(dim, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = config.center(i);
    for (std::size_t k = 0; k < dim; ++k) centroid[k] += c[k] / static_cast<double>(n);
  }
  double scale = 0.0;
  std::vector<std::vector<double>> diffs;
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = config.center(i);
    std::vector<double> d(dim);
    for (std::size_t k = 0; k < dim; ++k) {
      d[k] = c[k] - centroid[k];
      scale = std::max(scale, std::abs(d[k]));
    }
    diffs.push_back(std::move(d));
  }
  std::vector<std::vector<double>> basis;
  const double tol = rel_tol * std::max(scale, 1e-300);
  for (const auto& d : diffs) {
    std::vector<double> v = d;
    for (const auto& b : basis) {
      double dot = 0.0;
      for (std::size_t k = 0; k < dim; ++k) dot += v[k] * b[k];
      for (std::size_t k = 0; k < dim; ++k) v[k] -= dot * b[k];
    }
    double len = 0.0;
    for (double x : v) len += x * x;
    len = std::sqrt(len);
    if (len <= tol) continue;
    if (basis.size() == 2) return std::nullopt;
    for (double& x : v) x /= len;
    basis.push_back(std::move(v));
  }
  std::vector<Vec2> pts;
  for (const auto& d : diffs) {
    Vec2 v;
    if (!basis.empty()) for (std::size_t k = 0; k < dim; ++k) v.x += d[k] * basis[0][k];
    if (basis.size() > 1) for (std::size_t k = 0; k < dim; ++k) v.y += d[k] * basis[1][k];
    pts.push_back(v);
  }
  return Configuration::planar(pts, config.radii());
}

ScenarioResult proof_trace(const ExpansionPair& pair, const ProofTraceOptions& options) {
  if (pair.p.dim() != 2) throw Error(ErrorKind::kInvalidInput, "proof trace needs a planar pair", "dim");
  const ExpansionCheck check = is_expansion(pair.p, pair.q);
  if (!check.is_expansion) {
    throw Error(ErrorKind::kInvalidInput, "q is not an expansion of p", "q");
  }
  const std::vector<double> grid = options.t_grid.empty() ? uniform_grid(21) : options.t_grid;
  const Motion motion = lift_motion(pair.p, pair.q);
  std::vector<double> radii;
  for (double r : pair.p.radii()) {
    const double r2 = r * r + options.s_probe;
    if (!(r2 > 0.0)) throw Error(ErrorKind::kInvalidInput, "s_probe leaves a radius nonpositive", "s_probe");
    radii.push_back(std::sqrt(r2));
  }

  ScenarioResult out;
  out.name = "proof-trace";
  out.inputs = {{"s_probe", fmt(options.s_probe)},
                {"samples", std::to_string(options.samples)},
                {"seed", std::to_string(options.seed)},
                {"grid", std::to_string(grid.size())}};
  std::vector<double> du, dus, di, dis, exact, min_d;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const Configuration lifted = motion.at(grid[g]).with_radii(radii);
    double dmin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < lifted.size(); ++i) {
      for (std::size_t j = i + 1; j < lifted.size(); ++j) dmin = std::min(dmin, lifted.distance(i, j));
    }
    min_d.push_back(dmin);
    if (const auto flat = planar_projection(lifted)) {
      // A planar configuration inside E^4: dV_4/ds = pi * V_2.
      du.push_back(kPi * union_area(*flat).total_area);
      di.push_back(kPi * intersection_area(*flat).total_area);
      dus.push_back(0.0);
      dis.push_back(0.0);
      exact.push_back(1.0);
    } else {
      const WeightedBoundary w = dVds_weighted_boundary(lifted, options.samples, stream_seed(options.seed, g));
      du.push_back(w.union_value);
      di.push_back(w.intersection_value);
      dus.push_back(w.union_std_error);
      dis.push_back(w.intersection_std_error);
      exact.push_back(0.0);
    }
  }

  bool union_mono = true;
  bool inter_mono = true;
  double worst_union = 0.0;
  double worst_inter = 0.0;
  for (std::size_t g = 0; g + 1 < grid.size(); ++g) {
    const double su = std::hypot(dus[g], dus[g + 1]);
    const double si = std::hypot(dis[g], dis[g + 1]);
    const double drop_u = du[g] - du[g + 1];
    const double rise_i = di[g + 1] - di[g];
    worst_union = std::max(worst_union, su > 0.0 ? drop_u / su : (drop_u > 0.0 ? drop_u : 0.0));
    worst_inter = std::max(worst_inter, si > 0.0 ? rise_i / si : (rise_i > 0.0 ? rise_i : 0.0));
    union_mono = union_mono && drop_u <= 3.0 * su + 1e-9 * std::max(1.0, std::abs(du[g]));
    inter_mono = inter_mono && rise_i <= 3.0 * si + 1e-9 * std::max(1.0, std::abs(di[g]));
  }

  const double up = union_area(pair.p.with_radii(radii)).total_area;
  const double uq = union_area(pair.q.with_radii(radii)).total_area;
  const double ip = intersection_area(pair.p.with_radii(radii)).total_area;
  const double iq = intersection_area(pair.q.with_radii(radii)).total_area;
  out.metrics = {{"union_area_p", up},
                 {"union_area_q", uq},
                 {"intersection_area_p", ip},
                 {"intersection_area_q", iq},
                 {"worst_union_drop_sigma", worst_union},
                 {"worst_intersection_rise_sigma", worst_inter}};
  out.traces = {{"t", grid},
                {"dVds_union", du},
                {"dVds_union_std_error", dus},
                {"dVds_intersection", di},
                {"dVds_intersection_std_error", dis},
                {"exact", exact},
                {"min_distance", min_d}};
  out.verdicts = {{"union_trace_nondecreasing", union_mono},
                  {"intersection_trace_nonincreasing", inter_mono},
                  {"union_endpoints_ordered", uq >= up - 1e-9},
                  {"intersection_endpoints_ordered", iq <= ip + 1e-9}};
  out.pair = pair;
  out.motion = motion;
  return out;
}

}  // namespace kp
