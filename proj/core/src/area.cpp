#include "kp/area.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "kp/error.hpp"
#include "kp/power_diagram.hpp"

namespace kp {

namespace {

constexpr double kPi = std::numbers::pi;

void require_planar(const Configuration& config) {
  if (config.dim() != 2) {
    throw Error(ErrorKind::kInvalidInput, "exact areas need a planar configuration", "dim");
  }
}

}  // namespace

std::string_view to_string(AreaMode mode) {
  return mode == AreaMode::kUnion ? "union" : "intersection";
}

std::optional<AreaMode> parse_area_mode(std::string_view name) {
  if (name == "union") return AreaMode::kUnion;
  if (name == "intersection") return AreaMode::kIntersection;
  return std::nullopt;
}

AreaReport area_report(const Configuration& config, AreaMode mode) {
  require_planar(config);
  const PowerDiagram diagram(
      config, mode == AreaMode::kUnion ? CellVariant::kNearest : CellVariant::kFarthest);
  AreaReport report;
  report.mode = mode;
  const std::size_t n = config.size();
  report.per_cell_area.resize(n);
  report.per_cell_boundary.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = config.radius(i);
    const CircularPolygon cell = truncated_cell(diagram, i, r);
    report.per_cell_area[i] = region_area(cell);
    report.per_cell_boundary[i] = boundary_arc_length(cell, config.center2(i), r);
    report.total_area += report.per_cell_area[i];
    report.boundary_total += report.per_cell_boundary[i];
    report.weighted_boundary += 0.5 * report.per_cell_boundary[i] / r;
  }
  return report;
}

AreaReport union_area(const Configuration& config) { return area_report(config, AreaMode::kUnion); }

AreaReport intersection_area(const Configuration& config) {
  return area_report(config, AreaMode::kIntersection);
}

std::string area_csv_header() { return "mode,N,total_area,boundary_total,weighted_boundary"; }

std::string area_csv_row(const AreaReport& report) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s,%zu,%.12g,%.12g,%.12g", std::string(to_string(report.mode)).c_str(),
                report.per_cell_area.size(), report.total_area, report.boundary_total,
                report.weighted_boundary);
  return buf;
}

double lens_area(double d, double r1, double r2) {
  if (d >= r1 + r2) return 0.0;
  if (d <= std::abs(r1 - r2)) {
    const double r = std::min(r1, r2);
    return kPi * r * r;
  }
  const double c1 = std::clamp((d * d + r1 * r1 - r2 * r2) / (2.0 * d * r1), -1.0, 1.0);
  const double c2 = std::clamp((d * d + r2 * r2 - r1 * r1) / (2.0 * d * r2), -1.0, 1.0);
  const double k = (-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2);
  return r1 * r1 * std::acos(c1) + r2 * r2 * std::acos(c2) - 0.5 * std::sqrt(std::max(0.0, k));
}

ArcMeasure arc_measure(const Configuration& config, AreaMode mode) {
  require_planar(config);
  const std::size_t n = config.size();
  auto same_disk = [&](std::size_t a, std::size_t b) {
    return config.center2(a) == config.center2(b) && config.radius(a) == config.radius(b);
  };

  ArcMeasure out;
  std::vector<double> cuts;
  for (std::size_t i = 0; i < n; ++i) {
    bool duplicate = false;
    for (std::size_t j = 0; j < i && !duplicate; ++j) duplicate = same_disk(i, j);
    if (duplicate) continue;

    const Vec2 c = config.center2(i);
    const double r = config.radius(i);
    cuts.assign({0.0, 2.0 * kPi});
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || same_disk(i, j)) continue;
      const Vec2 e = config.center2(j) - c;
      const double d = norm(e);
      const double rj = config.radius(j);
      if (d >= r + rj || d <= std::abs(r - rj)) continue;
      const double phi = std::atan2(e.y, e.x);
      const double half = std::acos(std::clamp((d * d + r * r - rj * rj) / (2.0 * d * r), -1.0, 1.0));
      for (double a : {phi - half, phi + half}) {
        a = std::fmod(a, 2.0 * kPi);
        if (a < 0.0) a += 2.0 * kPi;
        cuts.push_back(a);
      }
    }
    std::sort(cuts.begin(), cuts.end());

    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const double a0 = cuts[k];
      const double a1 = cuts[k + 1];
      if (a1 - a0 <= 0.0) continue;
      const Vec2 mid = c + polar(r, 0.5 * (a0 + a1));
      bool keep = true;
      for (std::size_t j = 0; j < n && keep; ++j) {
        if (j == i || same_disk(i, j)) continue;
        const double dj = norm(mid - config.center2(j));
        const double rj = config.radius(j);
        keep = mode == AreaMode::kUnion ? dj >= rj : dj <= rj;
      }
      if (!keep) continue;
      out.area += 0.5 * (r * c.x * (std::sin(a1) - std::sin(a0)) -
                         r * c.y * (std::cos(a1) - std::cos(a0)) + r * r * (a1 - a0));
      out.perimeter += r * (a1 - a0);
    }
  }
  out.area = std::max(0.0, out.area);
  return out;
}

double inclusion_exclusion_area(const Configuration& config) {
  require_planar(config);
  const std::size_t n = config.size();
  if (n > 3) {
    throw Error(ErrorKind::kUnsupported, "inclusion-exclusion oracle supports N <= 3", "N");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += kPi * config.radius(i) * config.radius(i);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      total -= lens_area(config.distance(i, j), config.radius(i), config.radius(j));
    }
  }
  if (n == 3) total += arc_measure(config, AreaMode::kIntersection).area;
  return total;
}

namespace {

// Solves the dense system a x = b in place; false when numerically singular.
bool solve_linear(std::vector<double>& a, std::vector<double>& b, std::size_t m) {
  double scale = 0.0;
  for (double v : a) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return m == 0;
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t piv = col;
    for (std::size_t row = col + 1; row < m; ++row) {
      if (std::abs(a[row * m + col]) > std::abs(a[piv * m + col])) piv = row;
    }
    if (std::abs(a[piv * m + col]) <= 1e-12 * scale) return false;
    if (piv != col) {
      for (std::size_t k = 0; k < m; ++k) std::swap(a[col * m + k], a[piv * m + k]);
      std::swap(b[col], b[piv]);
    }
    for (std::size_t row = col + 1; row < m; ++row) {
      const double f = a[row * m + col] / a[col * m + col];
      for (std::size_t k = col; k < m; ++k) a[row * m + k] -= f * a[col * m + k];
      b[row] -= f * b[col];
    }
  }
  for (std::size_t col = m; col-- > 0;) {
    double s = b[col];
    for (std::size_t k = col + 1; k < m; ++k) s -= a[col * m + k] * b[k];
    b[col] = s / a[col * m + col];
  }
  return true;
}

}  // namespace

Feasibility intersection_feasibility(const Configuration& config, double tol) {
  const std::size_t n = config.size();
  const auto dim = static_cast<std::size_t>(config.dim());
  const std::size_t max_set = std::min(n, dim + 1);

  auto max_power = [&](const std::vector<double>& x) {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = config.center(i);
      double s = 0.0;
      for (std::size_t k = 0; k < dim; ++k) s += (x[k] - c[k]) * (x[k] - c[k]);
      worst = std::max(worst, s - config.radius(i) * config.radius(i));
    }
    return worst;
  };

  // The minimizer of the max-power function lies in the affine hull of an
  // affinely independent active set on which all powers agree, so trying
  // every such set of size <= dim + 1 finds it exactly.
  Feasibility best;
  best.min_max_power = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> subset;
  std::vector<double> x(dim);
  auto evaluate = [&]() {
    const std::size_t m = subset.size() - 1;
    const auto p0 = config.center(subset[0]);
    const double r0 = config.radius(subset[0]);
    std::vector<std::vector<double>> e(m, std::vector<double>(dim));
    for (std::size_t l = 0; l < m; ++l) {
      const auto pl = config.center(subset[l + 1]);
      for (std::size_t k = 0; k < dim; ++k) e[l][k] = pl[k] - p0[k];
    }
    std::vector<double> gram(m * m);
    std::vector<double> rhs(m);
    for (std::size_t a = 0; a < m; ++a) {
      double ee = 0.0;
      for (std::size_t b = 0; b < m; ++b) {
        double s = 0.0;
        for (std::size_t k = 0; k < dim; ++k) s += e[a][k] * e[b][k];
        gram[a * m + b] = 2.0 * s;
        if (a == b) ee = s;
      }
      const double ra = config.radius(subset[a + 1]);
      rhs[a] = ee - ra * ra + r0 * r0;
    }
    if (!solve_linear(gram, rhs, m)) return;
    for (std::size_t k = 0; k < dim; ++k) {
      x[k] = p0[k];
      for (std::size_t l = 0; l < m; ++l) x[k] += rhs[l] * e[l][k];
    }
    const double v = max_power(x);
    if (v < best.min_max_power) {
      best.min_max_power = v;
      best.witness = x;
    }
  };

  auto recurse = [&](auto&& self, std::size_t start) -> void {
    if (!subset.empty()) evaluate();
    if (subset.size() == max_set) return;
    for (std::size_t i = start; i < n; ++i) {
      subset.push_back(i);
      self(self, i + 1);
      subset.pop_back();
    }
  };
  recurse(recurse, 0);
  best.nonempty = best.min_max_power <= tol;
  return best;
}

bool intersection_nonempty(const Configuration& config, double tol) {
  return intersection_feasibility(config, tol).nonempty;
}

KirszbraunVerdict kirszbraun_check(const ExpansionPair& pair, double tol) {
  KirszbraunVerdict v;
  v.q_nonempty = intersection_nonempty(pair.q, tol);
  v.p_nonempty = intersection_nonempty(pair.p, tol);
  v.holds = !v.q_nonempty || v.p_nonempty;
  return v;
}

}  // namespace kp
