#pragma once

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "heislab/core/automorphism.hpp"
#include "heislab/core/point.hpp"

namespace heislab::geometry {

using core::Point;

/// Oriented horizontal line L(t) = base · (t cosθ, t sinθ, 0), i.e.
/// (a,b,c) + t(u, v, -bu + av). The parameter t is CC arc length.
struct HorizontalLine {
  Point base;
  double theta = 0.0;  // in [0, 2π)

  double u() const { return std::cos(theta); }
  double v() const { return std::sin(theta); }

  Point at(double t) const {
    const double cu = u(), cv = v();
    return {base.a + t * cu, base.b + t * cv, base.c + t * (base.a * cv - base.b * cu)};
  }

  /// Parameter of the point whose projection is closest to the projection of p.
  double foot(const Point& p) const { return (p.a - base.a) * u() + (p.b - base.b) * v(); }
};

/// The horizontal line through p with direction angle theta (wrapped to [0, 2π)).
HorizontalLine line_through(const Point& p, double theta);

/// g·L, still arc-length parameterized with the same t.
HorizontalLine translate(const Point& g, const HorizontalLine& line);

/// A_K(L) for a rotation or dilation K (any invertible K maps horizontal lines
/// to horizontal lines; the parameter is rescaled for non-conformal K).
HorizontalLine transform(const core::LinearAuto& k, const HorizontalLine& line);

/// Parameter intervals of L ∩ B_r(center), sorted. CC balls are not convex
/// along horizontal lines, so there can be two pieces. Endpoints are
/// accurate to `tol` in t.
std::vector<std::pair<double, double>> ball_pieces(const HorizontalLine& line, const Point& center,
                                                   double r, double tol = 1e-10);

/// ball_pieces(...) is nonempty, without locating the edges.
bool meets_ball(const HorizontalLine& line, const Point& center, double r);

/// Hull of `ball_pieces`, or nullopt when the line misses the open ball.
std::optional<std::pair<double, double>> ball_window(const HorizontalLine& line,
                                                     const Point& center, double r,
                                                     double tol = 1e-10);

/// min_t cc(L(t), center), found by scanning then golden-section refinement.
double distance_to_line(const HorizontalLine& line, const Point& center);

}  // namespace heislab::geometry
