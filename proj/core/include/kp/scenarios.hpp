#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kp/config.hpp"

namespace kp {

/// Output of a named construction or verification pipeline. Maps keep keys
/// sorted so serialization is deterministic.
struct ScenarioResult {
  std::string name;
  std::map<std::string, std::string> inputs;
  std::optional<ExpansionPair> pair;
  std::optional<Motion> motion;
  std::map<std::string, double> metrics;
  std::map<std::string, bool> verdicts;
  std::map<std::string, std::vector<double>> traces;

  bool passed() const;
};

struct HabichtKneserOptions {
  /// Square-lattice spacing of the inner disks is sqrt(2) * inner_fill; values
  /// below 1 leave no holes.
  double inner_fill = 0.9;
  /// Adjacent rim disks overlap by 2 * rim_overlap in center distance.
  double rim_overlap = 1e-4;
  /// Inner disks per rim gap on the sliding ring; every other one moves.
  int ring_density = 16;
};

/// Unit disks: k rim disks whose outer arcs form near-semicircular scallops,
/// an inner ring just below them and a lattice filling the inside (p). In q,
/// alternate inner-ring disks are reflected radially across the rim circle,
/// which never shortens a distance. Reports both union boundary lengths and
/// longer/shorter, which tends to pi/2.
ScenarioResult habicht_kneser(int k, const HabichtKneserOptions& options = {});

struct BernOptions {
  double radius_ratio = 0.95;
  /// Distance between the centers of the two large unit disks.
  double gap = 0.2;
  bool rigid = false;
  std::size_t grid = 401;
};

/// Two unit disks with centers gap apart and a smaller disk on their bisector
/// moving straight out through the notch where the two circles meet. All
/// distances grow, the unweighted boundary length drops on a sub-interval
/// and the weighted boundary does not.
ScenarioResult bern_example(const BernOptions& options = {});

enum class VerifyMethod { kExact2d, kMonteCarlo };

struct VerifyOptions {
  VerifyMethod method = VerifyMethod::kExact2d;
  double tol = 1e-9;
  std::uint64_t samples = 1000000;
  std::uint64_t seed = 1;
};

/// Union(q) >= union(p) and intersection(q) <= intersection(p), exactly in the
/// plane or within 3 standard errors of a paired Monte Carlo difference.
ScenarioResult verify_pair(const ExpansionPair& pair, const VerifyOptions& options = {});

struct ProofTraceOptions {
  std::vector<double> t_grid;  // empty: 21 uniform points
  double s_probe = 0.0;        // radii sqrt(r_i^2 + s_probe)
  std::uint64_t samples = 200000;
  std::uint64_t seed = 1;
};

/// Lifts a planar pair to E^4 and tabulates dV/ds of the union and the
/// intersection along the motion: pi * (planar area) where the lifted points
/// span a plane, sphere sampling elsewhere. Checks monotonicity within 3
/// combined standard errors and compares the endpoints.
ScenarioResult proof_trace(const ExpansionPair& pair, const ProofTraceOptions& options = {});

/// Projects points that span at most a 2-plane to planar coordinates; nullopt
/// when the affine rank exceeds 2.
std::optional<Configuration> planar_projection(const Configuration& config, double rel_tol = 1e-12);

}  // namespace kp
