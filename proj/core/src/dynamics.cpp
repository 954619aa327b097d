#include "kp/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "kp/error.hpp"
#include "kp/highdim.hpp"
#include "kp/power_diagram.hpp"
#include "kp/random.hpp"

namespace kp {

namespace {

constexpr double kPi = std::numbers::pi;

const MotionSegment& owning_segment(const Motion& motion, double t,
                                    std::optional<std::size_t> segment) {
  const std::size_t k = segment ? *segment : motion.segment_index(t);
  if (k >= motion.segments().size()) {
    throw Error(ErrorKind::kInvalidInput, "segment index out of range", "segment");
  }
  const MotionSegment& seg = motion.segments()[k];
  if (t < seg.t0 || t > seg.t1) {
    throw Error(ErrorKind::kInvalidInput, "t is outside the requested segment", "t");
  }
  return seg;
}

}  // namespace

std::vector<double> motion_velocity(const Motion& motion, double t,
                                    std::optional<std::size_t> segment, double rel_step) {
  const MotionSegment& seg = owning_segment(motion, t, segment);
  if (seg.velocity) return seg.velocity(t);
  // Central difference inside the segment, one-sided at its ends.
  const double h = rel_step * (seg.t1 - seg.t0);
  const double lo = std::max(seg.t0, t - h);
  const double hi = std::min(seg.t1, t + h);
  const auto a = seg.position(lo);
  const auto b = seg.position(hi);
  std::vector<double> v(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) v[k] = (b[k] - a[k]) / (hi - lo);
  return v;
}

double fd_derivative(const Motion& motion, double t,
                     const std::function<double(const Configuration&)>& quantity,
                     std::optional<double> h) {
  const MotionSegment& seg = owning_segment(motion, t, std::nullopt);
  const double step = h ? *h : 1e-5 * (seg.t1 - seg.t0);
  if (!(step > 0.0)) throw Error(ErrorKind::kInvalidInput, "step must be positive", "h");
  if (t - step < seg.t0 || t + step > seg.t1) {
    throw Error(ErrorKind::kInvalidInput,
                "t is within h of a segment boundary; use a smaller h", "h");
  }
  auto at = [&](double s) {
    return quantity(Configuration(motion.dim(), seg.position(s), motion.radii()));
  };
  const double d1 = (at(t + step) - at(t - step)) / (2.0 * step);
  const double d2 = (at(t + 0.5 * step) - at(t - 0.5 * step)) / step;
  return (4.0 * d2 - d1) / 3.0;
}

DerivativeSample csikos_derivative(const Motion& motion, double t, AreaMode mode,
                                   const CsikosOptions& options) {
  const MotionSegment& seg = owning_segment(motion, t, options.segment);
  const Configuration config(motion.dim(), seg.position(t), motion.radii());
  const std::vector<double> vel = motion_velocity(motion, t, options.segment, options.fd_rel_step);
  const std::size_t n = config.size();
  const auto dim = static_cast<std::size_t>(config.dim());

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (config.distance2(i, j) == 0.0) {
        throw Error(ErrorKind::kDegenerate,
                    "centers " + std::to_string(i) + " and " + std::to_string(j) +
                        " coincide; the derivative formula needs pairwise distinct centers",
                    "t");
      }
    }
  }

  DerivativeSample out;
  out.t = t;
  out.mode = mode;
  const CellVariant variant = mode == AreaMode::kUnion ? CellVariant::kNearest : CellVariant::kFarthest;
  std::optional<PowerDiagram> diagram;
  if (dim == 2) diagram.emplace(config, variant);
  const double sign = mode == AreaMode::kUnion ? 1.0 : -1.0;
  double var = 0.0;
  std::uint64_t stream = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto pi = config.center(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto pj = config.center(j);
      double dot_pv = 0.0;
      for (std::size_t k = 0; k < dim; ++k) {
        dot_pv += (pi[k] - pj[k]) * (vel[i * dim + k] - vel[j * dim + k]);
      }
      PairTerm term;
      term.i = i;
      term.j = j;
      term.rate = dot_pv / config.distance(i, j);
      if (dim == 2) {
        term.wall = wall(*diagram, i, j, config.radius(i)).length;
      } else {
        const McEstimate w = mc_wall_volume(config, i, j, variant, options.samples,
                                            stream_seed(options.seed, stream++));
        term.wall = w.value;
        term.wall_std_error = w.std_error;
      }
      out.formula_value += sign * term.rate * term.wall;
      var += term.rate * term.rate * term.wall_std_error * term.wall_std_error;
      out.per_pair_terms.push_back(term);
    }
  }
  out.formula_std_error = std::sqrt(var);

  if (options.compute_fd) {
    if (dim == 2) {
      auto area = [mode](const Configuration& c) { return area_report(c, mode).total_area; };
      out.fd_value = fd_derivative(motion, t, area, options.fd_rel_step * (seg.t1 - seg.t0));
    } else {
      const double h = options.mc_fd_step;
      if (t - h < seg.t0 || t + h > seg.t1) {
        throw Error(ErrorKind::kInvalidInput,
                    "t is within the Monte Carlo step of a segment boundary", "t");
      }
      const Configuration a(motion.dim(), seg.position(t - h), motion.radii());
      const Configuration b(motion.dim(), seg.position(t + h), motion.radii());
      const McEstimate d = mc_volume_delta(a, b, mode, options.samples,
                                           stream_seed(options.seed, 0x5eed0000ULL));
      out.fd_value = d.value / (2.0 * h);
      out.fd_std_error = d.std_error / (2.0 * h);
    }
  }
  return out;
}

WeightedBoundary dVds_weighted_boundary(const Configuration& config, std::uint64_t samples,
                                        std::uint64_t seed) {
  WeightedBoundary out;
  if (config.dim() == 2) {
    out.union_value = union_area(config).weighted_boundary;
    out.intersection_value = intersection_area(config).weighted_boundary;
    return out;
  }
  double vu = 0.0;
  double vi = 0.0;
  for (std::size_t i = 0; i < config.size(); ++i) {
    const double w = 0.5 / config.radius(i);
    const McEstimate u = mc_sphere_boundary(config, i, AreaMode::kUnion, samples, stream_seed(seed, 2 * i));
    const McEstimate x =
        mc_sphere_boundary(config, i, AreaMode::kIntersection, samples, stream_seed(seed, 2 * i + 1));
    out.union_value += w * u.value;
    out.intersection_value += w * x.value;
    vu += w * w * u.std_error * u.std_error;
    vi += w * w * x.std_error * x.std_error;
  }
  out.union_std_error = std::sqrt(vu);
  out.intersection_std_error = std::sqrt(vi);
  return out;
}

std::string_view to_string(ScanQuantity q) {
  switch (q) {
    case ScanQuantity::kUnionArea: return "union_area";
    case ScanQuantity::kIntersectionArea: return "intersection_area";
    case ScanQuantity::kWeightedBoundaryUnion: return "weighted_boundary_union";
    case ScanQuantity::kWeightedBoundaryIntersection: return "weighted_boundary_intersection";
    case ScanQuantity::kBoundaryLength: return "boundary_length";
  }
  return "unknown";
}

std::optional<ScanQuantity> parse_scan_quantity(std::string_view name) {
  for (ScanQuantity q : {ScanQuantity::kUnionArea, ScanQuantity::kIntersectionArea,
                         ScanQuantity::kWeightedBoundaryUnion,
                         ScanQuantity::kWeightedBoundaryIntersection, ScanQuantity::kBoundaryLength}) {
    if (to_string(q) == name) return q;
  }
  return std::nullopt;
}

double scan_value(const Configuration& config, ScanQuantity q) {
  switch (q) {
    case ScanQuantity::kUnionArea: return union_area(config).total_area;
    case ScanQuantity::kIntersectionArea: return intersection_area(config).total_area;
    case ScanQuantity::kWeightedBoundaryUnion: return union_area(config).weighted_boundary;
    case ScanQuantity::kWeightedBoundaryIntersection: return intersection_area(config).weighted_boundary;
    case ScanQuantity::kBoundaryLength: return union_area(config).boundary_total;
  }
  return 0.0;
}

ScanReport monotonicity_scan(const Motion& motion, ScanQuantity quantity,
                             const std::vector<double>& grid, double tol) {
  if (grid.empty()) throw Error(ErrorKind::kInvalidInput, "empty parameter grid", "grid");
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (grid[k] < 0.0 || grid[k] > 1.0 || (k > 0 && grid[k] < grid[k - 1])) {
      throw Error(ErrorKind::kInvalidInput, "grid must be sorted within [0, 1]", "grid");
    }
  }
  if (motion.dim() != 2) {
    throw Error(ErrorKind::kInvalidInput, "scans use exact planar measures", "dim");
  }
  ScanReport report;
  report.quantity = quantity;
  report.grid = grid;
  report.tol = tol;
  for (double t : grid) report.values.push_back(scan_value(motion.at(t), quantity));

  std::optional<double> run_start;
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    const double step = report.values[k + 1] - report.values[k];
    report.max_rise = std::max(report.max_rise, step);
    report.max_drop = std::max(report.max_drop, -step);
    if (step < -tol) {
      report.nondecreasing = false;
      if (!run_start) run_start = grid[k];
    } else if (run_start) {
      report.decrease_intervals.push_back({*run_start, grid[k]});
      run_start.reset();
    }
    if (step > tol) report.nonincreasing = false;
  }
  if (run_start) report.decrease_intervals.push_back({*run_start, grid.back()});
  return report;
}

std::string scan_csv(const ScanReport& report) {
  std::string out = "t,quantity,value,verdict\n";
  const std::string name(to_string(report.quantity));
  char buf[256];
  for (std::size_t k = 0; k < report.grid.size(); ++k) {
    const char* verdict = "start";
    if (k > 0) {
      const double step = report.values[k] - report.values[k - 1];
      verdict = step < -report.tol ? "drop" : (step > report.tol ? "rise" : "flat");
    }
    std::snprintf(buf, sizeof buf, "%.9g,%s,%.12g,%s\n", report.grid[k], name.c_str(),
                  report.values[k], verdict);
    out += buf;
  }
  std::snprintf(buf, sizeof buf,
                "# summary quantity=%s nondecreasing=%s nonincreasing=%s max_drop=%.6g "
                "max_rise=%.6g decrease_intervals=%zu\n",
                name.c_str(), report.nondecreasing ? "true" : "false",
                report.nonincreasing ? "true" : "false", report.max_drop, report.max_rise,
                report.decrease_intervals.size());
  out += buf;
  return out;
}

std::vector<double> uniform_grid(std::size_t points, double t0, double t1) {
  if (points == 0) throw Error(ErrorKind::kInvalidInput, "grid needs at least one point", "grid");
  if (points == 1) return {t0};
  std::vector<double> g(points);
  for (std::size_t k = 0; k < points; ++k) {
    g[k] = t0 + (t1 - t0) * static_cast<double>(k) / static_cast<double>(points - 1);
  }
  g.back() = t1;
  return g;
}

Remark3Report remark3_probe(const Motion& motion, int k, double t, double s_step, AreaMode mode) {
  if (k < 1 || k > 3) throw Error(ErrorKind::kUnsupported, "derivative order must be 1, 2 or 3", "k");
  if (motion.dim() != 2) throw Error(ErrorKind::kInvalidInput, "the probe uses exact planar walls", "dim");
  if (!(s_step > 0.0)) throw Error(ErrorKind::kInvalidInput, "step must be positive", "s_step");
  const Configuration config = motion.at(t);
  double min_r2 = std::numeric_limits<double>::infinity();
  for (double r : config.radii()) min_r2 = std::min(min_r2, r * r);
  if (4.0 * s_step >= min_r2) {
    throw Error(ErrorKind::kInvalidInput, "s_step too large for the smallest radius", "s_step");
  }

  const PowerDiagram diagram(
      config, mode == AreaMode::kUnion ? CellVariant::kNearest : CellVariant::kFarthest);
  Remark3Report report;
  report.k = k;
  report.t = t;
  report.s_step = s_step;
  report.mode = mode;

  for (std::size_t i = 0; i < config.size(); ++i) {
    for (std::size_t j = i + 1; j < config.size(); ++j) {
      Remark3Term term;
      term.i = i;
      term.j = j;
      if (config.distance2(i, j) == 0.0) {
        term.undefined = true;
        term.inconclusive = true;
        report.terms.push_back(term);
        continue;
      }
      const double ri = config.radius(i);
      // Cells do not move with s; only the truncation radius does.
      auto f = [&](double s) { return wall(diagram, i, j, std::sqrt(ri * ri + s)).length; };
      auto divided = [&](double h) {
        switch (k) {
          case 1: return (f(h) - f(-h)) / (2.0 * h);
          case 2: return (f(h) - 2.0 * f(0.0) + f(-h)) / (h * h);
          default: return (f(2.0 * h) - 2.0 * f(h) + 2.0 * f(-h) - f(-2.0 * h)) / (2.0 * h * h * h);
        }
      };
      const double fine = divided(s_step);
      const double coarse = divided(2.0 * s_step);
      const double scale = std::max(std::abs(f(0.0)), 1.0);
      const double roundoff = 1e-15 * scale / std::pow(s_step, k);
      term.value = fine;
      term.error = std::abs(fine - coarse) + roundoff;
      if (fine == 0.0 && coarse == 0.0) {
        term.error = 0.0;
      } else {
        term.inconclusive = term.error > std::abs(fine);
        term.sign = fine > 0.0 ? 1 : (fine < 0.0 ? -1 : 0);
      }
      report.terms.push_back(term);
    }
  }
  return report;
}

Motion linear_motion(const Configuration& p, const Configuration& q) {
  if (p.dim() != q.dim()) throw Error(ErrorKind::kMismatch, "dimensions differ", "dim");
  if (p.size() != q.size()) throw Error(ErrorKind::kMismatch, "point counts differ", "centers");
  if (p.radii() != q.radii()) throw Error(ErrorKind::kMismatch, "radii differ", "radii");
  const std::vector<double> a = p.coords();
  const std::vector<double> b = q.coords();
  MotionSegment seg;
  seg.position = [a, b](double t) {
    std::vector<double> out(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) out[k] = (1.0 - t) * a[k] + t * b[k];
    return out;
  };
  seg.velocity = [a, b](double) {
    std::vector<double> out(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) out[k] = b[k] - a[k];
    return out;
  };
  return Motion(p.dim(), p.radii(), {seg});
}

Motion rotation_motion(const Configuration& config, double angle) {
  if (config.dim() != 2) throw Error(ErrorKind::kInvalidInput, "rotation needs a planar configuration", "dim");
  const std::vector<double> base = config.coords();
  MotionSegment seg;
  seg.position = [base, angle](double t) {
    const double c = std::cos(angle * t);
    const double s = std::sin(angle * t);
    std::vector<double> out(base.size());
    for (std::size_t k = 0; k < base.size(); k += 2) {
      out[k] = c * base[k] - s * base[k + 1];
      out[k + 1] = s * base[k] + c * base[k + 1];
    }
    return out;
  };
  seg.velocity = [base, angle](double t) {
    const double c = std::cos(angle * t);
    const double s = std::sin(angle * t);
    std::vector<double> out(base.size());
    for (std::size_t k = 0; k < base.size(); k += 2) {
      out[k] = angle * (-s * base[k] - c * base[k + 1]);
      out[k + 1] = angle * (c * base[k] - s * base[k + 1]);
    }
    return out;
  };
  return Motion(2, config.radii(), {seg});
}

Motion random_smooth_motion(std::size_t n, std::uint64_t seed, const SmoothMotionOptions& options) {
  if (n < 1) throw Error(ErrorKind::kInvalidInput, "need at least one point", "N");
  Rng rng(seed);
  std::vector<double> c(2 * n), a(2 * n), b(2 * n), w(2 * n), phi(2 * n), radii(n);
  for (std::size_t i = 0; i < n; ++i) {
    radii[i] = rng.uniform(options.min_radius, options.max_radius);
    for (std::size_t k = 0; k < 2; ++k) {
      const std::size_t m = 2 * i + k;
      c[m] = rng.uniform(-options.box, options.box);
      a[m] = options.speed * rng.uniform(-1.0, 1.0);
      b[m] = 0.3 * options.speed * rng.uniform(-1.0, 1.0);
      w[m] = rng.uniform(0.5, 4.0);
      phi[m] = rng.uniform(0.0, 2.0 * kPi);
    }
  }
  MotionSegment seg;
  seg.position = [=](double t) {
    std::vector<double> out(c.size());
    for (std::size_t m = 0; m < c.size(); ++m) out[m] = c[m] + t * a[m] + b[m] * std::sin(w[m] * t + phi[m]);
    return out;
  };
  seg.velocity = [=](double t) {
    std::vector<double> out(c.size());
    for (std::size_t m = 0; m < c.size(); ++m) out[m] = a[m] + b[m] * w[m] * std::cos(w[m] * t + phi[m]);
    return out;
  };
  return Motion(2, radii, {seg});
}

Motion random_expanding_motion(std::size_t n, std::uint64_t seed, const SmoothMotionOptions& options) {
  if (n < 1) throw Error(ErrorKind::kInvalidInput, "need at least one point", "N");
  Rng rng(seed);
  std::vector<double> p(2 * n), v(2 * n), radii(n);
  for (std::size_t i = 0; i < n; ++i) {
    radii[i] = rng.uniform(options.min_radius, options.max_radius);
    p[2 * i] = rng.uniform(-options.box, options.box);
    p[2 * i + 1] = rng.uniform(-options.box, options.box);
  }
  const double lambda = options.speed * rng.uniform(0.05, 0.6);
  for (std::size_t m = 0; m < 2 * n; ++m) v[m] = lambda * p[m];
  auto pair_ok = [&](const std::vector<double>& vel) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double dx = p[2 * i] - p[2 * j];
        const double dy = p[2 * i + 1] - p[2 * j + 1];
        const double dvx = vel[2 * i] - vel[2 * j];
        const double dvy = vel[2 * i + 1] - vel[2 * j + 1];
        if (dx * dvx + dy * dvy < 0.0) return false;
      }
    }
    return true;
  };
  // Perturb single velocities, keeping only steps that preserve the pairwise condition.
  for (int round = 0; round < 8 * static_cast<int>(n); ++round) {
    std::vector<double> trial = v;
    const auto i = static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(n) - 1));
    trial[2 * i] += 0.5 * options.speed * rng.normal();
    trial[2 * i + 1] += 0.5 * options.speed * rng.normal();
    if (pair_ok(trial)) v = std::move(trial);
  }
  const double omega = rng.uniform(-kPi, kPi);

  MotionSegment seg;
  seg.position = [=](double t) {
    const double c = std::cos(omega * t);
    const double s = std::sin(omega * t);
    std::vector<double> out(p.size());
    for (std::size_t m = 0; m < p.size(); m += 2) {
      const double x = p[m] + t * v[m];
      const double y = p[m + 1] + t * v[m + 1];
      out[m] = c * x - s * y;
      out[m + 1] = s * x + c * y;
    }
    return out;
  };
  seg.velocity = [=](double t) {
    const double c = std::cos(omega * t);
    const double s = std::sin(omega * t);
    std::vector<double> out(p.size());
    for (std::size_t m = 0; m < p.size(); m += 2) {
      const double x = p[m] + t * v[m];
      const double y = p[m + 1] + t * v[m + 1];
      out[m] = c * v[m] - s * v[m + 1] + omega * (-s * x - c * y);
      out[m + 1] = s * v[m] + c * v[m + 1] + omega * (c * x - s * y);
    }
    return out;
  };
  return Motion(2, radii, {seg});
}

}  // namespace kp
