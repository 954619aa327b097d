#include "kp/highdim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "kp/error.hpp"
#include "kp/random.hpp"

namespace kp {

namespace {

constexpr double kPi = std::numbers::pi;

struct Box {
  std::vector<double> lo;
  std::vector<double> hi;
  bool empty = false;

  double volume() const {
    if (empty) return 0.0;
    double v = 1.0;
    for (std::size_t k = 0; k < lo.size(); ++k) v *= hi[k] - lo[k];
    return v;
  }
};

Box bounding_box(const Configuration& config, AreaMode mode) {
  const auto dim = static_cast<std::size_t>(config.dim());
  Box box;
  const double inf = std::numeric_limits<double>::infinity();
  if (mode == AreaMode::kUnion) {
    box.lo.assign(dim, inf);
    box.hi.assign(dim, -inf);
  } else {
    box.lo.assign(dim, -inf);
    box.hi.assign(dim, inf);
  }
  for (std::size_t i = 0; i < config.size(); ++i) {
    const auto c = config.center(i);
    const double r = config.radius(i);
    for (std::size_t k = 0; k < dim; ++k) {
      if (mode == AreaMode::kUnion) {
        box.lo[k] = std::min(box.lo[k], c[k] - r);
        box.hi[k] = std::max(box.hi[k], c[k] + r);
      } else {
        box.lo[k] = std::max(box.lo[k], c[k] - r);
        box.hi[k] = std::min(box.hi[k], c[k] + r);
      }
    }
  }
  for (std::size_t k = 0; k < dim; ++k) box.empty = box.empty || !(box.hi[k] > box.lo[k]);
  return box;
}

bool member(const Configuration& config, const double* x, AreaMode mode) {
  const auto dim = static_cast<std::size_t>(config.dim());
  const double* coords = config.coords().data();
  for (std::size_t i = 0; i < config.size(); ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      const double d = x[k] - coords[i * dim + k];
      s += d * d;
    }
    const double r = config.radius(i);
    const bool inside = s <= r * r;
    if (mode == AreaMode::kUnion && inside) return true;
    if (mode == AreaMode::kIntersection && !inside) return false;
  }
  return mode == AreaMode::kIntersection;
}

// Streams `samples` draws through chunked generators; `draw` fills one sample
// and returns its value.
template <class Draw>
void run_chunks(std::uint64_t samples, std::uint64_t seed, double& sum, double& sum2, Draw&& draw) {
  sum = 0.0;
  sum2 = 0.0;
  for (std::uint64_t chunk = 0, done = 0; done < samples; ++chunk) {
    Rng rng(stream_seed(seed, chunk));
    const std::uint64_t count = std::min(kMcChunk, samples - done);
    for (std::uint64_t s = 0; s < count; ++s) {
      const double v = draw(rng);
      sum += v;
      sum2 += v * v;
    }
    done += count;
  }
}

McEstimate finish(double sum, double sum2, double scale, std::uint64_t samples, std::uint64_t seed) {
  const auto n = static_cast<double>(samples);
  const double mean = sum / n;
  const double var = samples > 1 ? std::max(0.0, (sum2 - n * mean * mean) / (n - 1.0)) : 0.0;
  return {scale * mean, scale * std::sqrt(var / n), samples, seed};
}

void require_samples(std::uint64_t samples) {
  if (samples < 2) throw Error(ErrorKind::kInvalidInput, "need at least two samples", "samples");
}

}  // namespace

double ball_volume(int dim, double r) {
  const double n = dim;
  return std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n + 1.0) * std::pow(r, n);
}

double sphere_area(int dim, double r) {
  const double n = dim;
  return 2.0 * std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n) * std::pow(r, n - 1.0);
}

McEstimate mc_volume(const Configuration& config, AreaMode mode, std::uint64_t samples,
                     std::uint64_t seed) {
  require_samples(samples);
  const Box box = bounding_box(config, mode);
  if (box.empty) return {0.0, 0.0, samples, seed};
  const auto dim = static_cast<std::size_t>(config.dim());
  std::vector<double> x(dim);
  double sum = 0.0;
  double sum2 = 0.0;
  run_chunks(samples, seed, sum, sum2, [&](Rng& rng) {
    for (std::size_t k = 0; k < dim; ++k) x[k] = rng.uniform(box.lo[k], box.hi[k]);
    return member(config, x.data(), mode) ? 1.0 : 0.0;
  });
  return finish(sum, sum2, box.volume(), samples, seed);
}

McEstimate mc_volume_delta(const Configuration& a, const Configuration& b, AreaMode mode,
                           std::uint64_t samples, std::uint64_t seed) {
  require_samples(samples);
  if (a.dim() != b.dim()) throw Error(ErrorKind::kMismatch, "dimensions differ", "dim");
  const Box ba = bounding_box(a, mode);
  const Box bb = bounding_box(b, mode);
  if (ba.empty && bb.empty) return {0.0, 0.0, samples, seed};
  Box box = ba.empty ? bb : ba;
  if (!ba.empty && !bb.empty) {
    for (std::size_t k = 0; k < box.lo.size(); ++k) {
      box.lo[k] = std::min(ba.lo[k], bb.lo[k]);
      box.hi[k] = std::max(ba.hi[k], bb.hi[k]);
    }
  }
  const auto dim = static_cast<std::size_t>(a.dim());
  std::vector<double> x(dim);
  double sum = 0.0;
  double sum2 = 0.0;
  run_chunks(samples, seed, sum, sum2, [&](Rng& rng) {
    for (std::size_t k = 0; k < dim; ++k) x[k] = rng.uniform(box.lo[k], box.hi[k]);
    return (member(b, x.data(), mode) ? 1.0 : 0.0) - (member(a, x.data(), mode) ? 1.0 : 0.0);
  });
  return finish(sum, sum2, box.volume(), samples, seed);
}

McEstimate mc_wall_volume(const Configuration& config, std::size_t i, std::size_t j,
                          CellVariant variant, std::uint64_t samples, std::uint64_t seed) {
  require_samples(samples);
  const std::size_t n = config.size();
  if (i >= n || j >= n || i == j) {
    throw Error(ErrorKind::kInvalidInput, "wall needs two distinct valid indices", "j");
  }
  const auto dim = static_cast<std::size_t>(config.dim());
  if (dim < 2) throw Error(ErrorKind::kInvalidInput, "walls need dim >= 2", "dim");

  const auto pi = config.center(i);
  const double ri = config.radius(i);
  // Relative halfplanes {y : a_k . y <= c_k} with y = x - p_i.
  auto normal_to = [&](std::size_t k) {
    std::vector<double> a(dim);
    const auto pk = config.center(k);
    for (std::size_t m = 0; m < dim; ++m) a[m] = pk[m] - pi[m];
    return a;
  };
  auto offset_to = [&](const std::vector<double>& a, std::size_t k) {
    double aa = 0.0;
    for (double v : a) aa += v * v;
    const double rk = config.radius(k);
    return 0.5 * (aa + ri * ri - rk * rk);
  };

  const std::vector<double> nij = normal_to(j);
  double nn = 0.0;
  for (double v : nij) nn += v * v;
  if (nn == 0.0) {
    throw Error(ErrorKind::kDegenerate, "radical axis undefined for coincident centers", "j");
  }
  const double cij = offset_to(nij, j);
  std::vector<double> foot(dim);
  for (std::size_t m = 0; m < dim; ++m) foot[m] = cij / nn * nij[m];

  // Orthonormal basis of the hyperplane orthogonal to n_ij, by Gram-Schmidt
  // over the standard basis after the unit normal.
  std::vector<std::vector<double>> basis;
  basis.push_back(nij);
  for (double& v : basis[0]) v /= std::sqrt(nn);
  for (std::size_t e = 0; e < dim && basis.size() < dim; ++e) {
    std::vector<double> v(dim, 0.0);
    v[e] = 1.0;
    for (const auto& b : basis) {
      double d = 0.0;
      for (std::size_t m = 0; m < dim; ++m) d += v[m] * b[m];
      for (std::size_t m = 0; m < dim; ++m) v[m] -= d * b[m];
    }
    double len = 0.0;
    for (double x : v) len += x * x;
    len = std::sqrt(len);
    if (len < 1e-8) continue;
    for (double& x : v) x /= len;
    basis.push_back(std::move(v));
  }

  struct Constraint {
    std::vector<double> a;
    double c;
  };
  std::vector<Constraint> cons;
  bool empty = false;
  const double sign = variant == CellVariant::kNearest ? 1.0 : -1.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (k == i || k == j) continue;
    std::vector<double> a = normal_to(k);
    double aa = 0.0;
    for (double v : a) aa += v * v;
    const double c = offset_to(a, k);
    if (aa == 0.0) {
      const double rk = config.radius(k);
      if (rk == ri) {
        empty = empty || k < i;
      } else {
        empty = empty || sign * c < 0.0;
      }
      continue;
    }
    for (double& v : a) v *= sign;
    cons.push_back({std::move(a), sign * c});
  }
  if (empty) return {0.0, 0.0, samples, seed};

  const double box_volume = std::pow(2.0 * ri, static_cast<double>(dim - 1));
  std::vector<double> y(dim);
  double sum = 0.0;
  double sum2 = 0.0;
  run_chunks(samples, seed, sum, sum2, [&](Rng& rng) {
    y = foot;
    for (std::size_t b = 1; b < dim; ++b) {
      const double u = rng.uniform(-ri, ri);
      for (std::size_t m = 0; m < dim; ++m) y[m] += u * basis[b][m];
    }
    double yy = 0.0;
    for (double v : y) yy += v * v;
    if (yy > ri * ri) return 0.0;
    for (const auto& con : cons) {
      double d = 0.0;
      for (std::size_t m = 0; m < dim; ++m) d += con.a[m] * y[m];
      if (d > con.c) return 0.0;
    }
    return 1.0;
  });
  return finish(sum, sum2, box_volume, samples, seed);
}

McEstimate mc_sphere_boundary(const Configuration& config, std::size_t i, AreaMode mode,
                              std::uint64_t samples, std::uint64_t seed) {
  require_samples(samples);
  if (i >= config.size()) throw Error(ErrorKind::kInvalidInput, "index out of range", "i");
  const auto dim = static_cast<std::size_t>(config.dim());
  const auto pi = config.center(i);
  const double ri = config.radius(i);
  auto identical = [&](std::size_t k) {
    if (config.radius(k) != ri) return false;
    const auto pk = config.center(k);
    return std::equal(pk.begin(), pk.end(), pi.begin());
  };
  // An identical sphere with a smaller index owns the shared boundary.
  for (std::size_t k = 0; k < i; ++k) {
    if (identical(k)) return {0.0, 0.0, samples, seed};
  }

  std::vector<double> x(dim);
  double sum = 0.0;
  double sum2 = 0.0;
  run_chunks(samples, seed, sum, sum2, [&](Rng& rng) {
    double len = 0.0;
    for (std::size_t m = 0; m < dim; ++m) {
      x[m] = rng.normal();
      len += x[m] * x[m];
    }
    len = std::sqrt(len);
    for (std::size_t m = 0; m < dim; ++m) x[m] = pi[m] + ri * x[m] / len;
    for (std::size_t k = 0; k < config.size(); ++k) {
      if (k == i || identical(k)) continue;
      const auto pk = config.center(k);
      double s = 0.0;
      for (std::size_t m = 0; m < dim; ++m) s += (x[m] - pk[m]) * (x[m] - pk[m]);
      const double rk = config.radius(k);
      if (mode == AreaMode::kUnion && s < rk * rk) return 0.0;
      if (mode == AreaMode::kIntersection && s > rk * rk) return 0.0;
    }
    return 1.0;
  });
  return finish(sum, sum2, sphere_area(config.dim(), ri), samples, seed);
}

double revolution_volume(const std::function<double(double)>& planar_area, double r,
                         const QuadratureOptions& options) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw Error(ErrorKind::kInvalidInput, "radius must be positive", "r");
  }
  return 2.0 * kPi * adaptive_simpson([&](double s) { return planar_area(s) * s; }, 0.0, r, options);
}

double lifted_cell_volume(const PowerDiagram& diagram, std::size_t i, double r,
                          const QuadratureOptions& options) {
  return revolution_volume(
      [&](double s) { return s > 0.0 ? region_area(truncated_cell(diagram, i, s)) : 0.0; }, r,
      options);
}

double lifted_volume(const PowerDiagram& diagram, double s, const QuadratureOptions& options) {
  double total = 0.0;
  for (std::size_t i = 0; i < diagram.size(); ++i) {
    const double r = diagram.config().radius(i);
    const double r2 = r * r + s;
    if (!(r2 > 0.0)) throw Error(ErrorKind::kInvalidInput, "deformed radius is not positive", "s");
    total += lifted_cell_volume(diagram, i, std::sqrt(r2), options);
  }
  return total;
}

Lemma7Report lemma7_check(const Configuration& config, const std::vector<double>& s_values,
                          double fd_step, std::uint64_t samples, std::uint64_t seed) {
  if (config.dim() != 2) throw Error(ErrorKind::kInvalidInput, "configuration must be planar", "dim");
  if (!(fd_step > 0.0)) throw Error(ErrorKind::kInvalidInput, "step must be positive", "fd_step");
  double min_r2 = std::numeric_limits<double>::infinity();
  for (double r : config.radii()) min_r2 = std::min(min_r2, r * r);

  Lemma7Report report;
  report.fd_step = fd_step;
  report.step_warning = fd_step > 0.01 * min_r2;
  std::uint64_t stream = 0;
  for (AreaMode mode : {AreaMode::kUnion, AreaMode::kIntersection}) {
    const PowerDiagram diagram(
        config, mode == AreaMode::kUnion ? CellVariant::kNearest : CellVariant::kFarthest);
    for (double s : s_values) {
      if (!(s - fd_step > -min_r2)) {
        throw Error(ErrorKind::kInvalidInput, "s - fd_step must keep every radius positive", "s");
      }
      Lemma7Row row;
      row.s = s;
      row.mode = mode;
      row.fd = (lifted_volume(diagram, s + fd_step) - lifted_volume(diagram, s - fd_step)) /
               (2.0 * fd_step);
      std::vector<double> radii;
      for (double r : config.radii()) radii.push_back(std::sqrt(r * r + s));
      const Configuration deformed = config.with_radii(radii);
      row.planar_area = area_report(deformed, mode).total_area;
      const double target = kPi * row.planar_area;
      row.ratio = target > 0.0 ? row.fd / target : (row.fd == 0.0 ? 1.0 : 0.0);
      row.rel_error = target > 0.0 ? std::abs(row.fd - target) / target : std::abs(row.fd);
      row.lifted_volume = lifted_volume(diagram, s);
      if (samples > 0) {
        row.mc = mc_volume(deformed.embedded(2), mode, samples, stream_seed(seed, stream++));
        row.mc_sigma = row.mc.std_error > 0.0
                           ? std::abs(row.lifted_volume - row.mc.value) / row.mc.std_error
                           : std::abs(row.lifted_volume - row.mc.value);
      }
      report.rows.push_back(row);
    }
  }
  return report;
}

std::string mc_csv_header() { return "quantity,dim,N,estimate,std_error,samples,seed"; }

std::string mc_csv_row(const std::string& quantity, int dim, std::size_t n, const McEstimate& e) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s,%d,%zu,%.12g,%.12g,%llu,%llu", quantity.c_str(), dim, n,
                e.value, e.std_error, static_cast<unsigned long long>(e.samples),
                static_cast<unsigned long long>(e.seed));
  return buf;
}

}  // namespace kp
