#pragma once

#include <cstdint>
#include <vector>

#include "heislab/geometry/line.hpp"

namespace heislab::geometry {

/// How the line measure restricted to lines(B_r(x)) is normalized.
///  - unit_mass: total mass 1 for every ball.
///  - global: restriction of the left-invariant measure normalized by
///    N(lines(B_1(e))) = 1, so lines(B_r(x)) has mass r^3.
enum class LineNormalization { unit_mass, global };

struct LineSample {
  HorizontalLine line;
  double weight = 0.0;
};

/// One line from the measure restricted to lines(B_r(center)): θ uniform,
/// then a uniform crossing point on the vertical plane through the center
/// orthogonal to the direction, rejected until the line meets the ball. The
/// draw depends only on (seed, index).
HorizontalLine sample_line(const Point& center, double r, std::uint64_t seed, std::uint64_t index);

/// `count` lines with equal weights summing to the normalization's mass.
/// Throws on count == 0 or r <= 0.
std::vector<LineSample> sample_lines(const Point& center, double r, std::int64_t count,
                                     std::uint64_t seed,
                                     LineNormalization norm = LineNormalization::unit_mass,
                                     int workers = 1);

double line_measure_mass(double r, LineNormalization norm);

}  // namespace heislab::geometry
