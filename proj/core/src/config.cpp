#include "kp/config.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "kp/error.hpp"
#include "kp/random.hpp"

namespace kp {

namespace {

constexpr double kPi = std::numbers::pi;

void require_compatible(const Configuration& p, const Configuration& q) {
  if (p.dim() != q.dim()) {
    throw Error(ErrorKind::kMismatch,
                "dimension " + std::to_string(p.dim()) + " vs " + std::to_string(q.dim()), "dim");
  }
  if (p.size() != q.size()) {
    throw Error(ErrorKind::kMismatch,
                "center count " + std::to_string(p.size()) + " vs " + std::to_string(q.size()),
                "centers");
  }
}

double dist_between(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace

// ---------------------------------------------------------------------------
// Configuration

Configuration::Configuration(int dim, std::vector<double> coords, std::vector<double> radii)
    : dim_(dim), coords_(std::move(coords)), radii_(std::move(radii)) {
  if (dim_ < 1) {
    throw Error(ErrorKind::kInvalidInput, "dimension must be positive", "dim");
  }
  if (radii_.empty()) {
    throw Error(ErrorKind::kInvalidInput, "configuration needs at least one center", "centers");
  }
  if (coords_.size() != radii_.size() * static_cast<std::size_t>(dim_)) {
    throw Error(ErrorKind::kMismatch,
                std::to_string(coords_.size() / static_cast<std::size_t>(dim_)) +
                    " centers but " + std::to_string(radii_.size()) + " radii",
                "radii");
  }
  for (double c : coords_) {
    if (!std::isfinite(c)) {
      throw Error(ErrorKind::kInvalidInput, "non-finite coordinate", "centers");
    }
  }
  for (std::size_t i = 0; i < radii_.size(); ++i) {
    if (!(radii_[i] > 0.0) || !std::isfinite(radii_[i])) {
      throw Error(ErrorKind::kInvalidInput, "radius must be positive and finite",
                  "radii[" + std::to_string(i) + "]");
    }
  }
}

Configuration Configuration::planar(const std::vector<Vec2>& centers, std::vector<double> radii) {
  std::vector<double> coords;
  coords.reserve(2 * centers.size());
  for (const Vec2& c : centers) {
    coords.push_back(c.x);
    coords.push_back(c.y);
  }
  return Configuration(2, std::move(coords), std::move(radii));
}

double Configuration::distance(std::size_t i, std::size_t j) const {
  return dist_between(center(i), center(j));
}

double Configuration::distance2(std::size_t i, std::size_t j) const {
  const auto a = center(i);
  const auto b = center(j);
  double s = 0.0;
  for (int k = 0; k < dim_; ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

Configuration Configuration::with_radii(std::vector<double> radii) const {
  return Configuration(dim_, coords_, std::move(radii));
}

Configuration Configuration::with_coords(std::vector<double> coords) const {
  return Configuration(dim_, std::move(coords), radii_);
}

Configuration Configuration::embedded(int extra) const {
  const int d = dim_ + extra;
  std::vector<double> coords(size() * static_cast<std::size_t>(d), 0.0);
  for (std::size_t i = 0; i < size(); ++i) {
    std::copy_n(coords_.begin() + static_cast<std::ptrdiff_t>(i) * dim_, dim_,
                coords.begin() + static_cast<std::ptrdiff_t>(i) * d);
  }
  return Configuration(d, std::move(coords), radii_);
}

// ---------------------------------------------------------------------------
// Motion

Motion::Motion(int dim, std::vector<double> radii, std::vector<MotionSegment> segments)
    : dim_(dim), radii_(std::move(radii)), segments_(std::move(segments)) {
  if (dim_ < 1) throw Error(ErrorKind::kInvalidInput, "dimension must be positive", "dim");
  if (radii_.empty()) throw Error(ErrorKind::kInvalidInput, "motion needs points", "radii");
  for (double r : radii_) {
    if (!(r > 0.0)) throw Error(ErrorKind::kInvalidInput, "radius must be positive", "radii");
  }
  if (segments_.empty()) throw Error(ErrorKind::kInvalidInput, "no segments", "segments");
  if (segments_.front().t0 != 0.0 || segments_.back().t1 != 1.0) {
    throw Error(ErrorKind::kInvalidInput, "segments must cover [0, 1]", "segments");
  }
  for (std::size_t k = 0; k < segments_.size(); ++k) {
    const auto& seg = segments_[k];
    if (!(seg.t1 > seg.t0) || !seg.position) {
      throw Error(ErrorKind::kInvalidInput, "empty or unevaluable segment",
                  "segments[" + std::to_string(k) + "]");
    }
    if (k + 1 < segments_.size()) {
      const auto& next = segments_[k + 1];
      if (next.t0 != seg.t1) {
        throw Error(ErrorKind::kInvalidInput, "segments must be contiguous",
                    "segments[" + std::to_string(k + 1) + "]");
      }
      const auto a = seg.position(seg.t1);
      const auto b = next.position(next.t0);
      for (std::size_t c = 0; c < a.size() && c < b.size(); ++c) {
        if (std::abs(a[c] - b[c]) > 1e-9 * std::max(1.0, std::abs(a[c]))) {
          throw Error(ErrorKind::kInvalidInput, "motion is discontinuous at a segment boundary",
                      "segments[" + std::to_string(k + 1) + "]");
        }
      }
    }
  }
}

std::size_t Motion::segment_index(double t) const {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw Error(ErrorKind::kInvalidInput, "parameter outside [0, 1]", "t");
  }
  for (std::size_t k = 0; k < segments_.size(); ++k) {
    if (t <= segments_[k].t1) return k;
  }
  return segments_.size() - 1;
}

std::vector<double> Motion::positions(double t) const {
  auto out = segments_[segment_index(t)].position(t);
  if (out.size() != radii_.size() * static_cast<std::size_t>(dim_)) {
    throw Error(ErrorKind::kInvalidInput, "evaluator returned the wrong number of coordinates",
                "position");
  }
  return out;
}

Configuration Motion::at(double t) const { return Configuration(dim_, positions(t), radii_); }

bool Motion::has_velocity(double t) const {
  return static_cast<bool>(segments_[segment_index(t)].velocity);
}

std::optional<std::vector<double>> Motion::velocity(double t) const {
  const auto& seg = segments_[segment_index(t)];
  if (!seg.velocity) return std::nullopt;
  auto v = seg.velocity(t);
  if (v.size() != radii_.size() * static_cast<std::size_t>(dim_)) {
    throw Error(ErrorKind::kInvalidInput, "velocity evaluator returned the wrong size",
                "velocity");
  }
  return v;
}

// ---------------------------------------------------------------------------
// Expansion predicates and explicit motions

ExpansionCheck is_expansion(const Configuration& p, const Configuration& q, double tol) {
  require_compatible(p, q);
  ExpansionCheck out;
  const std::size_t n = p.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dp2 = p.distance2(i, j);
      const double dq2 = q.distance2(i, j);
      // Squared comparison first; the exact test only runs on candidates.
      if (dq2 >= dp2) continue;
      const double deficit = std::sqrt(dp2) - std::sqrt(dq2);
      if (deficit > tol) {
        out.is_expansion = false;
        out.violations.push_back({i, j, deficit});
      }
    }
  }
  return out;
}

Motion lift_motion(const Configuration& p, const Configuration& q) {
  require_compatible(p, q);
  const int d = p.dim();
  const std::size_t n = p.size();
  std::vector<double> mid(n * d), half(n * d);
  for (std::size_t k = 0; k < n * static_cast<std::size_t>(d); ++k) {
    mid[k] = 0.5 * (p.coords()[k] + q.coords()[k]);
    half[k] = 0.5 * (p.coords()[k] - q.coords()[k]);
  }
  MotionSegment seg;
  seg.position = [mid, half, n, d](double t) {
    const double c = std::cos(kPi * t);
    const double s = std::sin(kPi * t);
    std::vector<double> out(n * 2 * d);
    for (std::size_t i = 0; i < n; ++i) {
      for (int k = 0; k < d; ++k) {
        const std::size_t src = i * d + k;
        out[i * 2 * d + k] = mid[src] + c * half[src];
        out[i * 2 * d + d + k] = s * half[src];
      }
    }
    return out;
  };
  seg.velocity = [half, n, d](double t) {
    const double c = std::cos(kPi * t);
    const double s = std::sin(kPi * t);
    std::vector<double> out(n * 2 * d);
    for (std::size_t i = 0; i < n; ++i) {
      for (int k = 0; k < d; ++k) {
        const std::size_t src = i * d + k;
        out[i * 2 * d + k] = -kPi * s * half[src];
        out[i * 2 * d + d + k] = kPi * c * half[src];
      }
    }
    return out;
  };
  return Motion(2 * d, p.radii(), {std::move(seg)});
}

LiftCoefficients lift_coefficients(const Configuration& p, const Configuration& q, std::size_t i,
                                   std::size_t j) {
  require_compatible(p, q);
  double minus2 = 0.0, plus2 = 0.0, dp2 = 0.0, dq2 = 0.0;
  for (int k = 0; k < p.dim(); ++k) {
    const double a = p.center(i)[k] - p.center(j)[k];
    const double b = q.center(i)[k] - q.center(j)[k];
    minus2 += (a - b) * (a - b);
    plus2 += (a + b) * (a + b);
    dp2 += a * a;
    dq2 += b * b;
  }
  return {0.25 * (minus2 + plus2), 0.5 * (dp2 - dq2)};
}

Motion scaling_motion(const Configuration& p, const Configuration& q, double lambda) {
  require_compatible(p, q);
  if (!(lambda > 1.0)) {
    throw Error(ErrorKind::kInvalidInput, "scale factor must exceed 1", "lambda");
  }
  const int d = p.dim();
  const std::size_t n = p.size();
  for (std::size_t i = 0; i < n; ++i) {
    bool fixed = true, scaled = true;
    double scale = 0.0;
    for (int k = 0; k < d; ++k) scale = std::max(scale, std::abs(p.center(i)[k]));
    const double tol = 1e-12 * std::max(1.0, lambda * scale);
    for (int k = 0; k < d; ++k) {
      const double pk = p.center(i)[k];
      const double qk = q.center(i)[k];
      fixed = fixed && std::abs(qk - pk) <= tol;
      scaled = scaled && std::abs(qk - lambda * pk) <= tol;
    }
    if (!fixed && !scaled) {
      throw Error(ErrorKind::kInvalidInput, "q_i is neither p_i nor lambda*p_i",
                  "q[" + std::to_string(i) + "]");
    }
  }
  const auto check = is_expansion(p, q);
  if (!check.is_expansion) {
    const auto& v = check.violations.front();
    throw Error(ErrorKind::kInvalidInput, "q is not an expansion of p",
                "pair(" + std::to_string(v.i) + "," + std::to_string(v.j) + ")");
  }

  std::vector<double> mid(n * d), half(n * d), lift(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (int k = 0; k < d; ++k) {
      const std::size_t idx = i * d + k;
      mid[idx] = 0.5 * (p.coords()[idx] + q.coords()[idx]);
      half[idx] = 0.5 * (p.coords()[idx] - q.coords()[idx]);
      s += half[idx] * half[idx];
    }
    lift[i] = std::sqrt(s);
  }
  const int out_dim = d + 1;
  MotionSegment seg;
  seg.position = [mid, half, lift, n, d, out_dim](double t) {
    const double c = std::cos(kPi * t);
    const double s = std::sin(kPi * t);
    std::vector<double> out(n * out_dim);
    for (std::size_t i = 0; i < n; ++i) {
      for (int k = 0; k < d; ++k) out[i * out_dim + k] = mid[i * d + k] + c * half[i * d + k];
      out[i * out_dim + d] = s * lift[i];
    }
    return out;
  };
  seg.velocity = [half, lift, n, d, out_dim](double t) {
    const double c = std::cos(kPi * t);
    const double s = std::sin(kPi * t);
    std::vector<double> out(n * out_dim);
    for (std::size_t i = 0; i < n; ++i) {
      for (int k = 0; k < d; ++k) out[i * out_dim + k] = -kPi * s * half[i * d + k];
      out[i * out_dim + d] = kPi * c * lift[i];
    }
    return out;
  };
  return Motion(out_dim, p.radii(), {std::move(seg)});
}

double scaled_pair_rate(std::span<const double> pi_coords, std::span<const double> pj_coords,
                        double lambda, double t) {
  double ni = 0.0, nj = 0.0, dij = 0.0;
  for (std::size_t k = 0; k < pi_coords.size(); ++k) {
    ni += pi_coords[k] * pi_coords[k];
    nj += pj_coords[k] * pj_coords[k];
    const double d = pi_coords[k] - pj_coords[k];
    dij += d * d;
  }
  if (dij == 0.0) return 0.0;
  const double gap = std::sqrt(ni) - std::sqrt(nj);
  const double bracket =
      (lambda + 1.0) / (lambda - 1.0) + std::cos(kPi * t) * (gap * gap / dij - 1.0);
  return 0.5 * kPi * (lambda - 1.0) * (lambda - 1.0) * std::sin(kPi * t) * dij * bracket;
}

// ---------------------------------------------------------------------------
// Distance profiles

bool DistanceProfile::all_nondecreasing() const {
  return std::all_of(pairs.begin(), pairs.end(), [](const PairProfile& p) { return p.nondecreasing; });
}

bool DistanceProfile::all_nonincreasing() const {
  return std::all_of(pairs.begin(), pairs.end(), [](const PairProfile& p) { return p.nonincreasing; });
}

DistanceProfile distance_profile(const Motion& motion, const std::vector<double>& grid,
                                 double tol) {
  if (grid.empty()) throw Error(ErrorKind::kInvalidInput, "empty parameter grid", "grid");
  for (std::size_t g = 0; g < grid.size(); ++g) {
    if (!(grid[g] >= 0.0 && grid[g] <= 1.0) || (g > 0 && grid[g] < grid[g - 1])) {
      throw Error(ErrorKind::kInvalidInput, "grid must be sorted within [0, 1]", "grid");
    }
  }
  const std::size_t n = motion.size();
  DistanceProfile out;
  out.grid = grid;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) out.pairs.push_back({i, j});
  out.distances.reserve(grid.size());
  for (double t : grid) {
    const Configuration c = motion.at(t);
    std::vector<double> row;
    row.reserve(out.pairs.size());
    for (const auto& pr : out.pairs) row.push_back(c.distance(pr.i, pr.j));
    out.distances.push_back(std::move(row));
  }
  for (std::size_t g = 1; g < grid.size(); ++g) {
    for (std::size_t k = 0; k < out.pairs.size(); ++k) {
      const double delta = out.distances[g][k] - out.distances[g - 1][k];
      auto& pr = out.pairs[k];
      pr.max_drop = std::max(pr.max_drop, -delta);
      pr.max_rise = std::max(pr.max_rise, delta);
    }
  }
  for (auto& pr : out.pairs) {
    pr.nondecreasing = pr.max_drop <= tol;
    pr.nonincreasing = pr.max_rise <= tol;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Convex hull perimeter (monotone chain)

double hull_perimeter(std::span<const Vec2> points) {
  if (points.empty()) throw Error(ErrorKind::kInvalidInput, "no points", "centers");
  std::vector<Vec2> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(),
            [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() == 1) return 0.0;

  std::vector<Vec2> hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);  // last point repeats the first

  double perimeter = 0.0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    perimeter += norm(hull[(i + 1) % hull.size()] - hull[i]);
  }
  return perimeter;
}

double hull_perimeter(const Configuration& config) {
  if (config.dim() != 2) {
    throw Error(ErrorKind::kInvalidInput, "hull perimeter needs a planar configuration", "dim");
  }
  std::vector<Vec2> pts;
  for (std::size_t i = 0; i < config.size(); ++i) pts.push_back(config.center2(i));
  return hull_perimeter(pts);
}

// ---------------------------------------------------------------------------
// Random expansion pairs

std::optional<PairStrategy> parse_pair_strategy(std::string_view name) {
  if (name == "dilate-perturb") return PairStrategy::kDilatePerturb;
  if (name == "lift-sample") return PairStrategy::kLiftSample;
  if (name == "sort-project") return PairStrategy::kSortProject;
  return std::nullopt;
}

std::string_view to_string(PairStrategy strategy) {
  switch (strategy) {
    case PairStrategy::kDilatePerturb: return "dilate-perturb";
    case PairStrategy::kLiftSample: return "lift-sample";
    case PairStrategy::kSortProject: return "sort-project";
  }
  return "unknown";
}

namespace {

// Shrinks contractions by this factor so rounding can never turn a
// mathematical contraction into a certified violation.
constexpr double kContractionGuard = 1.0 - 1e-9;

std::vector<double> random_centers(Rng& rng, int dim, std::size_t n, double box) {
  std::vector<double> c(n * dim);
  for (double& x : c) x = rng.uniform(-box, box);
  return c;
}

std::vector<double> centroid(const std::vector<double>& c, int dim) {
  const std::size_t n = c.size() / dim;
  std::vector<double> m(dim, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (int k = 0; k < dim; ++k) m[k] += c[i * dim + k] / static_cast<double>(n);
  return m;
}

// Random orthonormal matrix (row-major, size m x m) by Gram-Schmidt on Gaussians.
std::vector<double> random_rotation(Rng& rng, int m) {
  std::vector<double> a(m * m);
  for (int r = 0; r < m; ++r) {
    for (;;) {
      for (int k = 0; k < m; ++k) a[r * m + k] = rng.normal();
      for (int prev = 0; prev < r; ++prev) {
        double dp = 0.0;
        for (int k = 0; k < m; ++k) dp += a[r * m + k] * a[prev * m + k];
        for (int k = 0; k < m; ++k) a[r * m + k] -= dp * a[prev * m + k];
      }
      double nn = 0.0;
      for (int k = 0; k < m; ++k) nn += a[r * m + k] * a[r * m + k];
      nn = std::sqrt(nn);
      if (nn > 1e-6) {
        for (int k = 0; k < m; ++k) a[r * m + k] /= nn;
        break;
      }
    }
  }
  return a;
}

ExpansionPair attempt_pair(Rng& rng, int dim, std::size_t n, const RandomPairOptions& opt) {
  std::vector<double> radii(n);
  for (double& r : radii) r = rng.uniform(opt.min_radius, opt.max_radius);

  switch (opt.strategy) {
    case PairStrategy::kDilatePerturb: {
      auto p = random_centers(rng, dim, n, opt.box);
      const double lambda = 1.0 + (opt.max_lambda - 1.0) * (1.0 - rng.uniform());
      std::vector<double> q(p.size());
      for (std::size_t k = 0; k < p.size(); ++k) q[k] = lambda * p[k];
      if (opt.perturbation > 0.0) {
        for (std::size_t i = 0; i < n; ++i) {
          std::vector<double> trial(dim);
          for (int k = 0; k < dim; ++k) trial[k] = q[i * dim + k] + opt.perturbation * rng.normal();
          bool ok = true;
          for (std::size_t j = 0; j < n && ok; ++j) {
            if (j == i) continue;
            double dq = 0.0, dp = 0.0;
            for (int k = 0; k < dim; ++k) {
              const double a = trial[k] - q[j * dim + k];
              const double b = p[i * dim + k] - p[j * dim + k];
              dq += a * a;
              dp += b * b;
            }
            ok = dq >= dp;
          }
          if (ok) std::copy(trial.begin(), trial.end(), q.begin() + static_cast<std::ptrdiff_t>(i) * dim);
        }
      }
      return {Configuration(dim, std::move(p), radii), Configuration(dim, std::move(q), radii)};
    }
    case PairStrategy::kLiftSample: {
      // Lift q into E^(dim+1), rotate, project back: a linear map of norm <= 1.
      auto q = random_centers(rng, dim, n, opt.box);
      const auto m = centroid(q, dim);
      const int up = dim + 1;
      const auto rot = random_rotation(rng, up);
      std::vector<double> p(q.size());
      for (std::size_t i = 0; i < n; ++i) {
        for (int r = 0; r < dim; ++r) {
          double v = 0.0;
          for (int k = 0; k < dim; ++k) v += rot[r * up + k] * (q[i * dim + k] - m[k]);
          p[i * dim + r] = m[r] + kContractionGuard * v;
        }
      }
      return {Configuration(dim, std::move(p), radii), Configuration(dim, std::move(q), radii)};
    }
    case PairStrategy::kSortProject: {
      // Project q onto a random line through its centroid.
      auto q = random_centers(rng, dim, n, opt.box);
      const auto m = centroid(q, dim);
      std::vector<double> u(dim);
      double nn = 0.0;
      while (nn < 1e-12) {
        nn = 0.0;
        for (double& x : u) {
          x = rng.normal();
          nn += x * x;
        }
      }
      nn = std::sqrt(nn);
      for (double& x : u) x /= nn;
      std::vector<double> p(q.size());
      for (std::size_t i = 0; i < n; ++i) {
        double proj = 0.0;
        for (int k = 0; k < dim; ++k) proj += u[k] * (q[i * dim + k] - m[k]);
        for (int k = 0; k < dim; ++k) p[i * dim + k] = m[k] + kContractionGuard * proj * u[k];
      }
      return {Configuration(dim, std::move(p), radii), Configuration(dim, std::move(q), radii)};
    }
  }
  throw Error(ErrorKind::kInvalidInput, "unknown strategy", "strategy");
}

}  // namespace

ExpansionPair random_expansion_pair(int dim, std::size_t n, std::uint64_t seed,
                                    const RandomPairOptions& options) {
  if (dim < 1) throw Error(ErrorKind::kInvalidInput, "dimension must be positive", "dim");
  if (n < 2) throw Error(ErrorKind::kInvalidInput, "need at least two points", "N");
  if (!(options.max_lambda > 1.0)) {
    throw Error(ErrorKind::kInvalidInput, "max_lambda must exceed 1", "max_lambda");
  }
  for (int round = 0; round < options.max_rounds; ++round) {
    Rng rng(stream_seed(seed, static_cast<std::uint64_t>(round)));
    auto pair = attempt_pair(rng, dim, n, options);
    if (is_expansion(pair.p, pair.q, 0.0).is_expansion) return pair;
  }
  throw Error(ErrorKind::kConstruction,
              "no certified expansion pair after " + std::to_string(options.max_rounds) +
                  " rounds; try a different strategy",
              std::string(to_string(options.strategy)));
}

}  // namespace kp
