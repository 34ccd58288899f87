#pragma once

#include <span>

namespace heislab::geometry {

struct CutRecord {
  double weight = 0.0;
  double perimeter = 0.0;
  /// Fraction of the reference volume inside the cut.
  double volume_fraction = 0.0;
};

struct PerimeterSplit {
  double mass_small = 0.0;  // perimeter <= theta
  double mass_large = 0.0;
  /// Σ_{small} weight * 2 f (1 - f): L1 mass of the dropped cut metrics.
  double dropped_error_bound = 0.0;
  /// Σ weight * perimeter / theta, an upper bound for mass_large.
  double large_bound = 0.0;
};

/// Throws invalid_argument on theta <= 0 or a negative weight; throws
/// std::logic_error if the Chebyshev bound mass_large <= large_bound fails.
PerimeterSplit split_by_perimeter(std::span<const CutRecord> cuts, double theta);

}  // namespace heislab::geometry
