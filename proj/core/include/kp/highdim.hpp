#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "kp/area.hpp"
#include "kp/config.hpp"
#include "kp/power_diagram.hpp"
#include "kp/quadrature.hpp"

namespace kp {

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

/// Samples are drawn in chunks of this size, chunk c from stream_seed(seed, c).
inline constexpr std::uint64_t kMcChunk = 65536;

double ball_volume(int dim, double r);
double sphere_area(int dim, double r);

/// Indicator sampling over the tight bounding box of the balls (union) or the
/// intersection of the balls' boxes (intersection).
McEstimate mc_volume(const Configuration& config, AreaMode mode, std::uint64_t samples,
                     std::uint64_t seed);

/// vol(b) - vol(a) from one shared sample set over the hull of both boxes.
/// The paired indicators make the error scale with the changed region.
McEstimate mc_volume_delta(const Configuration& a, const Configuration& b, AreaMode mode,
                           std::uint64_t samples, std::uint64_t seed);

/// (dim-1)-volume of W_ij(p_i, r_i) (nearest) or W^ij(p_i, r_i) (farthest).
/// Throws kDegenerate when p_i == p_j.
McEstimate mc_wall_volume(const Configuration& config, std::size_t i, std::size_t j,
                          CellVariant variant, std::uint64_t samples, std::uint64_t seed);

/// K_i: measure of the part of sphere i on the boundary of the union or the
/// intersection, sampled uniformly on the sphere.
McEstimate mc_sphere_boundary(const Configuration& config, std::size_t i, AreaMode mode,
                              std::uint64_t samples, std::uint64_t seed);

/// 2 pi * integral_0^r A(s) s ds by adaptive Simpson.
double revolution_volume(const std::function<double(double)>& planar_area, double r,
                         const QuadratureOptions& options = {});

/// Volume in E^4 of the planar cell i truncated at r, for the planar
/// configuration embedded with a zero second block.
double lifted_cell_volume(const PowerDiagram& diagram, std::size_t i, double r,
                          const QuadratureOptions& options = {});

/// Sum of lifted_cell_volume over all cells at radii sqrt(r_i^2 + s).
double lifted_volume(const PowerDiagram& diagram, double s, const QuadratureOptions& options = {});

struct Lemma7Row {
  double s = 0.0;
  AreaMode mode = AreaMode::kUnion;
  double fd = 0.0;             // central difference of the E^4 volume in s
  double planar_area = 0.0;    // exact area at radii r(s)
  double ratio = 0.0;          // fd / (pi * planar_area)
  double rel_error = 0.0;      // |fd - pi*area| / (pi*area)
  double lifted_volume = 0.0;  // quadrature E^4 volume at s
  McEstimate mc;               // independent E^4 estimate at s
  double mc_sigma = 0.0;       // |lifted_volume - mc.value| / mc.std_error
};

struct Lemma7Report {
  std::vector<Lemma7Row> rows;
  double fd_step = 0.0;
  bool step_warning = false;  // fd_step > 0.01 * min r_i^2
};

Lemma7Report lemma7_check(const Configuration& config, const std::vector<double>& s_values,
                          double fd_step, std::uint64_t samples, std::uint64_t seed);

/// "quantity,dim,N,estimate,std_error,samples,seed"
std::string mc_csv_header();
std::string mc_csv_row(const std::string& quantity, int dim, std::size_t n, const McEstimate& e);

}  // namespace kp
