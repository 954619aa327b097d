#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "kp/vec2.hpp"

namespace kp {

/// N labeled centers in E^dim, each carrying a positive radius.
/// Coordinates are stored row-major: center i occupies [i*dim, (i+1)*dim).
class Configuration {
 public:
  Configuration() = default;
  /// Validates: dim >= 1, N >= 1, coords.size() == N*dim, finite values,
  /// every radius > 0.
  Configuration(int dim, std::vector<double> coords, std::vector<double> radii);

  static Configuration planar(const std::vector<Vec2>& centers, std::vector<double> radii);

  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return radii_.size(); }

  std::span<const double> center(std::size_t i) const {
    return {coords_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
  }
  /// Only meaningful when dim() == 2.
  Vec2 center2(std::size_t i) const { return {coords_[2 * i], coords_[2 * i + 1]}; }
  double radius(std::size_t i) const { return radii_[i]; }

  const std::vector<double>& coords() const noexcept { return coords_; }
  const std::vector<double>& radii() const noexcept { return radii_; }

  double distance(std::size_t i, std::size_t j) const;
  double distance2(std::size_t i, std::size_t j) const;

  Configuration with_radii(std::vector<double> radii) const;
  Configuration with_coords(std::vector<double> coords) const;
  /// Appends `extra` zero coordinates to every center (E^n inside E^(n+extra)).
  Configuration embedded(int extra) const;

 private:
  int dim_ = 0;
  std::vector<double> coords_;
  std::vector<double> radii_;
};

/// q is meant to be an expansion of p; same N, dim and radii.
struct ExpansionPair {
  Configuration p;
  Configuration q;
};

/// One smooth piece of a motion on [t0, t1]. `position` returns N*dim
/// coordinates; `velocity`, when present, returns their t-derivatives.
struct MotionSegment {
  double t0 = 0.0;
  double t1 = 1.0;
  std::function<std::vector<double>(double)> position;
  std::function<std::vector<double>(double)> velocity;
};

/// A piecewise-smooth path of configurations over t in [0, 1] with fixed radii.
class Motion {
 public:
  Motion(int dim, std::vector<double> radii, std::vector<MotionSegment> segments);

  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return radii_.size(); }
  const std::vector<double>& radii() const noexcept { return radii_; }
  const std::vector<MotionSegment>& segments() const noexcept { return segments_; }

  /// Index of the segment that owns t (the first whose closed range contains it).
  std::size_t segment_index(double t) const;
  std::vector<double> positions(double t) const;
  Configuration at(double t) const;
  bool has_velocity(double t) const;
  /// Analytic velocities; nullopt when the owning segment has none.
  std::optional<std::vector<double>> velocity(double t) const;

 private:
  int dim_;
  std::vector<double> radii_;
  std::vector<MotionSegment> segments_;
};

struct PairViolation {
  std::size_t i = 0;
  std::size_t j = 0;
  double deficit = 0.0;  // |p_i-p_j| - |q_i-q_j|, positive when the pair shrank
};

struct ExpansionCheck {
  bool is_expansion = true;
  std::vector<PairViolation> violations;
};

inline constexpr double kDefaultExpansionTol = 1e-12;

/// True iff every pair satisfies |q_i-q_j| >= |p_i-p_j| - tol.
ExpansionCheck is_expansion(const Configuration& p, const Configuration& q,
                            double tol = kDefaultExpansionTol);

/// Analytic motion in E^(2*dim) joining p (t=0) to q (t=1) along which every
/// pairwise distance is monotone:
///   p_i(t) = ((p_i+q_i)/2 + cos(pi t)(p_i-q_i)/2,  sin(pi t)(p_i-q_i)/2).
Motion lift_motion(const Configuration& p, const Configuration& q);

/// |p_i(t)-p_j(t)|^2 = constant + cos_coefficient * cos(pi t) along lift_motion.
struct LiftCoefficients {
  double constant = 0.0;
  double cos_coefficient = 0.0;
};
LiftCoefficients lift_coefficients(const Configuration& p, const Configuration& q, std::size_t i,
                                   std::size_t j);

/// Motion in E^(dim+1) for pairs where every q_i is p_i or lambda*p_i:
///   p_i(t) = ((p_i+q_i)/2 + cos(pi t)(p_i-q_i)/2,  sin(pi t)|p_i-q_i|/2).
Motion scaling_motion(const Configuration& p, const Configuration& q, double lambda);

/// d/dt |p_i(t)-p_j(t)|^2 along scaling_motion when both points are scaled:
///   (pi/2)(l-1)^2 sin(pi t) |p_i-p_j|^2 [ (l+1)/(l-1) + cos(pi t)((|p_i|-|p_j|)^2/|p_i-p_j|^2 - 1) ].
double scaled_pair_rate(std::span<const double> pi_coords, std::span<const double> pj_coords,
                        double lambda, double t);

struct PairProfile {
  std::size_t i = 0;
  std::size_t j = 0;
  bool nondecreasing = true;
  bool nonincreasing = true;
  double max_drop = 0.0;
  double max_rise = 0.0;
};

struct DistanceProfile {
  std::vector<double> grid;
  /// distances[g][k] is the distance of pair k (lexicographic i<j) at grid[g].
  std::vector<std::vector<double>> distances;
  std::vector<PairProfile> pairs;

  bool all_nondecreasing() const;
  bool all_nonincreasing() const;
};

DistanceProfile distance_profile(const Motion& motion, const std::vector<double>& grid,
                                 double tol = kDefaultExpansionTol);

/// Perimeter of the convex hull of planar points. A hull that degenerates to
/// a segment is traversed both ways, so two points give 2|p_1-p_2|.
double hull_perimeter(std::span<const Vec2> points);
double hull_perimeter(const Configuration& config);

enum class PairStrategy { kDilatePerturb, kLiftSample, kSortProject };

std::optional<PairStrategy> parse_pair_strategy(std::string_view name);
std::string_view to_string(PairStrategy strategy);

struct RandomPairOptions {
  PairStrategy strategy = PairStrategy::kDilatePerturb;
  /// Centers are drawn uniformly from [-box, box]^dim.
  double box = 1.5;
  double min_radius = 0.5;
  double max_radius = 1.5;
  /// Gaussian step applied to q in dilate-perturb; 0 yields q = lambda*p exactly.
  double perturbation = 0.1;
  double max_lambda = 2.0;
  int max_rounds = 64;
};

/// Deterministic given the seed; the result always passes is_expansion(p, q, 0).
ExpansionPair random_expansion_pair(int dim, std::size_t n, std::uint64_t seed,
                                    const RandomPairOptions& options = {});

}  // namespace kp
