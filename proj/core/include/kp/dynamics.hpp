#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kp/area.hpp"
#include "kp/config.hpp"

namespace kp {

struct PairTerm {
  std::size_t i = 0;
  std::size_t j = 0;
  double rate = 0.0;  // d'_ij
  double wall = 0.0;  // Vol_{n-1} of the wall between cells i and j
  double wall_std_error = 0.0;
};

struct DerivativeSample {
  double t = 0.0;
  AreaMode mode = AreaMode::kUnion;
  double formula_value = 0.0;
  double formula_std_error = 0.0;
  double fd_value = 0.0;
  double fd_std_error = 0.0;
  std::vector<PairTerm> per_pair_terms;
};

struct CsikosOptions {
  /// Monte Carlo samples per wall (dim >= 3) and for the paired volume difference.
  std::uint64_t samples = 200000;
  std::uint64_t seed = 1;
  /// Relative finite-difference step (times the segment length) in the plane.
  double fd_rel_step = 1e-5;
  /// Absolute step of the paired Monte Carlo difference in dim >= 3.
  double mc_fd_step = 1e-2;
  bool compute_fd = true;
  /// Segment whose velocity is used at t; a junction belongs to two segments.
  std::optional<std::size_t> segment;
};

/// dV/dt = sum_{i<j} d'_ij Vol_{n-1}[W_ij] (negated terms for the intersection),
/// with walls exact in the plane and sampled otherwise. Throws kDegenerate
/// when two centers coincide at t.
DerivativeSample csikos_derivative(const Motion& motion, double t, AreaMode mode,
                                   const CsikosOptions& options = {});

/// Central difference with one Richardson step:
///   (4 D(h/2) - D(h)) / 3,  D(h) = (f(t+h) - f(t-h)) / 2h.
/// Throws when [t-h, t+h] leaves the smooth segment owning t.
double fd_derivative(const Motion& motion, double t,
                     const std::function<double(const Configuration&)>& quantity,
                     std::optional<double> h = std::nullopt);

/// Velocities at t: analytic when the segment has them, central differences
/// of positions otherwise.
std::vector<double> motion_velocity(const Motion& motion, double t,
                                    std::optional<std::size_t> segment = std::nullopt,
                                    double rel_step = 1e-5);

/// (1/2) sum K_i / r_i for the union and the intersection; the derivative
/// of the volume under r_i(s) = sqrt(r_i^2 + s) at s = 0. Exact in the plane,
/// sampled on the spheres otherwise (samples per sphere).
struct WeightedBoundary {
  double union_value = 0.0;
  double union_std_error = 0.0;
  double intersection_value = 0.0;
  double intersection_std_error = 0.0;
};
WeightedBoundary dVds_weighted_boundary(const Configuration& config, std::uint64_t samples = 200000,
                                        std::uint64_t seed = 1);

enum class ScanQuantity {
  kUnionArea,
  kIntersectionArea,
  kWeightedBoundaryUnion,
  kWeightedBoundaryIntersection,
  kBoundaryLength,
};

std::string_view to_string(ScanQuantity q);
std::optional<ScanQuantity> parse_scan_quantity(std::string_view name);
double scan_value(const Configuration& config, ScanQuantity q);

struct Interval {
  double t0 = 0.0;
  double t1 = 0.0;
};

struct ScanReport {
  ScanQuantity quantity = ScanQuantity::kUnionArea;
  std::vector<double> grid;
  std::vector<double> values;
  double tol = 0.0;
  bool nondecreasing = true;
  bool nonincreasing = true;
  double max_drop = 0.0;  // largest v[k] - v[k+1]
  double max_rise = 0.0;  // largest v[k+1] - v[k]
  std::vector<Interval> decrease_intervals;  // maximal runs of drops beyond tol
};

ScanReport monotonicity_scan(const Motion& motion, ScanQuantity quantity,
                             const std::vector<double>& grid, double tol = 1e-10);

/// "t,quantity,value,verdict" rows followed by one summary line.
std::string scan_csv(const ScanReport& report);

std::vector<double> uniform_grid(std::size_t points, double t0 = 0.0, double t1 = 1.0);

struct Remark3Term {
  std::size_t i = 0;
  std::size_t j = 0;
  double value = 0.0;  // k-th s-derivative of the wall length at s = 0
  double error = 0.0;  // estimated error of the divided difference
  int sign = 0;
  bool inconclusive = false;
  bool undefined = false;  // coincident centers: no radical axis
};

struct Remark3Report {
  int k = 1;
  double t = 0.0;
  double s_step = 0.0;
  AreaMode mode = AreaMode::kUnion;
  std::vector<Remark3Term> terms;
};

/// Signs of (d/ds)^k of each planar wall length under r_i(s) = sqrt(r_i^2 + s),
/// by central divided differences at steps h and 2h. Exploratory only.
Remark3Report remark3_probe(const Motion& motion, int k, double t, double s_step, AreaMode mode);

// Motion generators used by checks and benchmarks.

/// p_i(t) = (1 - t) p_i + t q_i.
Motion linear_motion(const Configuration& p, const Configuration& q);

/// Rigid rotation of a planar configuration by angle * t about the origin.
Motion rotation_motion(const Configuration& config, double angle);

struct SmoothMotionOptions {
  double box = 1.5;
  double min_radius = 0.5;
  double max_radius = 1.5;
  double speed = 1.0;
};

/// Planar analytic motion p_i(t) = c_i + t a_i + b_i sin(w_i t + phi_i);
/// no monotonicity guarantee.
Motion random_smooth_motion(std::size_t n, std::uint64_t seed, const SmoothMotionOptions& options = {});

/// Planar analytic expansion p_i(t) = Rot(w t)(p_i + t v_i) where every pair
/// has (p_i - p_j).(v_i - v_j) >= 0, so all distances are nondecreasing.
Motion random_expanding_motion(std::size_t n, std::uint64_t seed,
                               const SmoothMotionOptions& options = {});

}  // namespace kp
