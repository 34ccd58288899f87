#pragma once

#include <cstdint>
#include <vector>

#include "heislab/estimate.hpp"
#include "heislab/geometry/monotonicity.hpp"

namespace heislab::geometry {

/// Interior endpoints of E ∩ L inside the window (window ends excluded).
std::int64_t boundary_count(const IntervalTrace& trace);

/// ∫_{lines(B_r)} #endpoints(E ∩ L ∩ B_r) dN. The kinematic constant is not
/// applied.
Estimate perimeter_kinematic(const Region& e, const Point& center, double r, std::int64_t samples,
                             std::uint64_t seed, const LineEstimatorOptions& options = {});

/// Bucket j with delta^{j+1} <= length/r < delta^j; lengths >= r go to 0.
int scale_bucket(double length, double r, double delta);

struct ScaleProfile {
  double delta = 0.5;
  double r = 1.0;
  /// ŵ_j and its standard error.
  std::vector<double> masses;
  std::vector<double> std_errors;
  /// Integer endpoint counts behind the masses: half_counts[j] counts
  /// endpoints of E-intervals plus endpoints of E'-intervals in bucket j, so
  /// ŵ_j = weight * half_counts[j] / 2.
  std::vector<std::int64_t> half_counts;
  /// Interior boundary points over all lines; Σ half_counts = 2 * endpoints.
  std::int64_t endpoints = 0;
  double weight = 0.0;  // per-line weight
  /// weight * endpoints, the perimeter_kinematic value on the same lines.
  double total = 0.0;
  double total_std_error = 0.0;

  double mass_sum() const;
};

ScaleProfile scale_profile(const Region& e, const Point& center, double r, double delta,
                           std::int64_t samples, std::uint64_t seed,
                           const LineEstimatorOptions& options = {});

/// Scale profile of already computed traces with per-line weight.
ScaleProfile scale_profile_of(std::span<const IntervalTrace> traces, double weight, double r,
                              double delta);

/// Smallest j <= ceil(1/delta) with masses[j] <= delta * Σ masses.
/// Throws no_good_scale when there is none.
int find_good_scale(std::span<const double> masses, double delta);

}  // namespace heislab::geometry
