#pragma once

#include <vector>

#include "heislab/geometry/line.hpp"
#include "heislab/geometry/region.hpp"

namespace heislab::geometry {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// E ∩ L ∩ B as sorted disjoint segments, each at least `resolution` long.
/// `window` is the hull of L ∩ B and `pieces` its components (empty means
/// the whole window); parameters outside the pieces belong to neither E nor
/// its complement.
struct IntervalTrace {
  Interval window;
  std::vector<Interval> segments;
  double resolution = 0.0;
  std::vector<Interval> pieces;

  bool empty_window() const { return !(window.hi > window.lo); }
  /// Components of L ∩ B.
  std::vector<Interval> parts() const;
  double mass() const;
  /// Measure of L ∩ B.
  double extent() const;
  /// Segments of (L ∩ B) \ E, with the same resolution.
  IntervalTrace complement() const;
  /// Checks sortedness, disjointness, containment and minimum length.
  bool valid() const;
};

/// Samples the indicator along the window at spacing <= step, refines every
/// crossing by 10 bisection steps, then removes runs (of E or of its
/// complement) shorter than the resolution, shortest first.
IntervalTrace restrict_to_line(const Region& e, const HorizontalLine& line, const Point& center,
                               double r, double step);

/// Same, on an explicit parameter window (no ball).
IntervalTrace restrict_to_window(const Region& e, const HorizontalLine& line, Interval window,
                                 double step);

}  // namespace heislab::geometry
