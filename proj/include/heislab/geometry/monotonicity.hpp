#pragma once

#include <cstdint>
#include <span>

#include "heislab/estimate.hpp"
#include "heislab/geometry/line_sampling.hpp"
#include "heislab/geometry/region.hpp"
#include "heislab/geometry/trace.hpp"

namespace heislab::geometry {

/// inf over subintervals I of the window (I may be empty) of ∫|χ_I - χ_E|.
/// Exact on the interval structure: a maximum-subarray scan over the signed
/// run lengths (+ inside E, - outside).
double nonconvexity(const IntervalTrace& trace);

/// Exhaustive O(k^2) search over intervals with endpoints at run boundaries.
/// Reference for `nonconvexity`.
double nonconvexity_bruteforce(const IntervalTrace& trace);

/// NC(E) + NC(E') on one trace.
double nonmonotonicity(const IntervalTrace& trace);

double nonmonotonicity_line(const Region& e, const HorizontalLine& line, const Point& center,
                            double r, double step);

struct LineEstimatorOptions {
  double step = 0.0;  // 0 means r / 512
  LineNormalization normalization = LineNormalization::global;
  int workers = 1;
};

/// r^{-4} ∫_{lines(B_r(center))} NM(E, L) dN, by Monte Carlo over
/// `sample_lines`. Scale invariant under the global normalization.
Estimate nonmonotonicity_total(const Region& e, const Point& center, double r,
                               std::int64_t samples, std::uint64_t seed,
                               const LineEstimatorOptions& options = {});

}  // namespace heislab::geometry
