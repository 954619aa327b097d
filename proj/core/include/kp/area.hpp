#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kp/config.hpp"

namespace kp {

enum class AreaMode { kUnion, kIntersection };

std::string_view to_string(AreaMode mode);
std::optional<AreaMode> parse_area_mode(std::string_view name);

/// Exact planar measures of the union or intersection of the disks, split
/// over the truncated power cells. per_cell_boundary[i] is K_i, the part of
/// the boundary carried by circle i.
struct AreaReport {
  AreaMode mode = AreaMode::kUnion;
  double total_area = 0.0;
  std::vector<double> per_cell_area;
  std::vector<double> per_cell_boundary;
  double boundary_total = 0.0;
  double weighted_boundary = 0.0;  // (1/2) sum K_i / r_i
};

AreaReport area_report(const Configuration& config, AreaMode mode);
AreaReport union_area(const Configuration& config);
AreaReport intersection_area(const Configuration& config);

/// "mode,N,total_area,boundary_total,weighted_boundary"
std::string area_csv_header();
std::string area_csv_row(const AreaReport& report);

/// Area of B(0, r1) ∩ B(d e, r2), including the nested and disjoint cases.
double lens_area(double d, double r1, double r2);

/// Area and perimeter of the union or intersection computed circle by circle:
/// each circle is cut at its crossings with the others and every sub-arc on
/// the boundary contributes its Green's theorem term. Shares no code with the
/// power-diagram path.
struct ArcMeasure {
  double area = 0.0;
  double perimeter = 0.0;
};
ArcMeasure arc_measure(const Configuration& config, AreaMode mode);

/// Union area for N <= 3 by inclusion-exclusion over pairwise lenses and the
/// triple intersection. Throws kUnsupported for N > 3.
double inclusion_exclusion_area(const Configuration& config);

/// Minimum over x of max_i (|x - p_i|^2 - r_i^2), with a minimizer.
struct Feasibility {
  bool nonempty = false;
  double min_max_power = 0.0;
  std::vector<double> witness;
};

inline constexpr double kFeasibilityTol = 1e-9;

/// Whether the closed balls have a common point, in any dimension.
Feasibility intersection_feasibility(const Configuration& config, double tol = kFeasibilityTol);
bool intersection_nonempty(const Configuration& config, double tol = kFeasibilityTol);

/// For a pair where p is a contraction of q: a nonempty intersection for q
/// must imply one for p.
struct KirszbraunVerdict {
  bool q_nonempty = false;
  bool p_nonempty = false;
  bool holds = true;
};
KirszbraunVerdict kirszbraun_check(const ExpansionPair& pair, double tol = kFeasibilityTol);

}  // namespace kp
