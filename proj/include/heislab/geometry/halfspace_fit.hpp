#pragma once

#include <cstdint>

#include "heislab/core/halfspace.hpp"
#include "heislab/estimate.hpp"
#include "heislab/geometry/region.hpp"

namespace heislab::geometry {

struct HalfSpaceFit {
  core::HalfSpace plane = core::HalfSpace::empty();
  /// Estimated |(E ∩ B_r) △ (P ∩ B_r)| / |B_r| with its standard error, on
  /// the points used for the search (biased low).
  Estimate error;
  /// The same fraction for the chosen plane on an independent set of
  /// `budget` points; unbiased for that plane.
  Estimate holdout;
  /// The plane as {n·ξ <= o} in the frame ξ = δ_{1/r}(center^{-1} p);
  /// unset for sentinels.
  core::Vec3 frame_normal{0.0, 0.0, 0.0};
  double frame_offset = 0.0;
};

/// Best half-space for E in B_r(center). Candidates are scored on one common
/// set of `budget` uniform points of the ball: a grid of normals, an exact
/// threshold sweep per normal, then a pattern search on the normal. The
/// EMPTY and FULL sentinels are always candidates.
HalfSpaceFit halfspace_fit(const Region& e, const Point& center, double r, std::int64_t budget,
                           std::uint64_t seed, int workers = 1);

/// Symmetric-difference fraction of a given half-space against E in
/// B_r(center), on `budget` fresh uniform points.
Estimate symdiff_fraction(const Region& e, const core::HalfSpace& plane, const Point& center,
                          double r, std::int64_t budget, std::uint64_t seed, int workers = 1);

}  // namespace heislab::geometry
