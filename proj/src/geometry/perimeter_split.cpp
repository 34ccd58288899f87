#include "heislab/geometry/perimeter_split.hpp"

#include <stdexcept>

#include "heislab/error.hpp"

namespace heislab::geometry {

PerimeterSplit split_by_perimeter(std::span<const CutRecord> cuts, double theta) {
  if (!(theta > 0.0)) throw Error(ErrorCode::invalid_argument, "theta must be positive");
  PerimeterSplit out;
  double weighted_perimeter = 0.0;
  for (const auto& c : cuts) {
    if (!(c.weight >= 0.0)) throw Error(ErrorCode::invalid_argument, "cut weights must be nonnegative");
    weighted_perimeter += c.weight * c.perimeter;
    if (c.perimeter <= theta) {
      out.mass_small += c.weight;
      out.dropped_error_bound += c.weight * 2.0 * c.volume_fraction * (1.0 - c.volume_fraction);
    } else {
      out.mass_large += c.weight;
    }
  }
  out.large_bound = weighted_perimeter / theta;
  if (out.mass_large > out.large_bound * (1.0 + 1e-12)) {
    throw std::logic_error("perimeter split violates mass_large <= sum(weight*perimeter)/theta");
  }
  return out;
}

}  // namespace heislab::geometry
