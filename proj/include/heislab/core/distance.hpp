#pragma once

#include "heislab/core/point.hpp"

namespace heislab::core {

/// Carnot–Carathéodory distance from the identity to p.
///
/// Horizontal lifts satisfy dz = a db - b da, so the height reached by a
/// planar curve from the origin is twice its signed area. A minimizing curve
/// projects to a circular arc; with chord length l and turning angle phi the
/// height is l^2 (phi - sin phi) / (2 (1 - cos phi)), monotone in
/// phi on (-2π, 2π). The angle is found by bisection and the length is
/// |phi| * sqrt(z / (phi - sin phi)).
double cc_norm(const Point& p);

/// Left-invariant CC distance, cc_norm(p^{-1} q). Absolute accuracy ~1e-9
/// for moderate coordinates.
double cc_distance(const Point& p, const Point& q);

/// ((a-a')^2+(b-b')^2)^{1/2} + |c-c'+ab'-ba'|^{1/2}; two-sidedly comparable to
/// cc_distance.
double box_quasidistance(const Point& p, const Point& q);

/// The negative-type metric rho evaluated verbatim from its defining formula
/// ((x,y,z),(t,u,v)) -> ( [((t-x)^2+(u-y)^2)^2 + (v-z+2xu-2yt)^2]^{1/2}
///                       + (t-x)^2 + (u-y)^2 )^{1/2}.
///
/// The vertical term v-z+2xu-2yt is left-invariant for the group law with
/// correction -2(ab'-ba'); see `to_rho_model` for the matching isomorphism.
double rho_distance(const Point& p, const Point& q);

/// Group isomorphism (a,b,c) -> (a,b,-2c) carrying the multiplication used
/// here onto the one under which rho is left-invariant. rho∘to_rho_model is
/// bi-Lipschitz to cc_distance; plain rho is not (it degenerates near the
/// diagonal away from the center).
inline Point to_rho_model(const Point& p) { return {p.a, p.b, -2.0 * p.c}; }

/// max |c| over the closed unit ball: the horizontal lift of a half circle
/// of length 1 encloses area 1/(2π) with its chord and reaches height 1/π.
/// Pure vertical points are lower (|c| = 1/(2π)).
inline constexpr double unit_ball_max_height = 0.31830988618379067154;  // 1/π

/// Two-sided constants lo <= f(p)/g(p) <= hi for a pair of homogeneous,
/// rotation-invariant gauges. Both ratios below depend on one parameter
/// s in [0,1] along (1-s, 0, s^2), so a dense 1-D scan with golden-section
/// refinement of the extrema gives them to ~1e-10.
struct ComparisonConstants {
  double lo = 0.0;
  double hi = 0.0;
  double s_lo = 0.0;  // argmin
  double s_hi = 0.0;  // argmax
};

/// cc_norm(p) / box_quasidistance(e, p).
ComparisonConstants box_ball_constants(int grid = 4096);

/// rho(e, to_rho_model(p)) / cc_norm(p).
ComparisonConstants rho_cc_constants(int grid = 4096);

/// cc_distance(center, p) < r, short-circuited by the box quasi-distance
/// whenever the comparison constants decide the answer with margin.
bool in_cc_ball(const Point& center, double r, const Point& p);

}  // namespace heislab::core
