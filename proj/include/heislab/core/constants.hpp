#pragma once

#include <array>

#include "heislab/core/point.hpp"

namespace heislab::core {

/// Values quoted by the non-embedding theorem and the PI-space structure of the
/// group. Recorded as data; nothing in the library is calibrated from them.
struct PaperConstants {
  static constexpr double delta = 0x1p-60;
  static constexpr double a_stability = 0x1p52;
  static constexpr double beta_doubling = 16.0;
  static constexpr double chi = 4.0 / 3.0;

  static constexpr std::array<GridPoint, 6> generators{{
      {1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1},
  }};
};

/// Numerical tolerances shared across modules.
struct Tolerances {
  static constexpr double det_min = 1e-12;
  static constexpr double vertical_normal = 1e-12;
  // cc_distance: bisection bracket width on the arc angle, and the threshold
  // below which the reduced vertical coordinate is treated as zero.
  static constexpr double arc_bracket = 1e-12;
  static constexpr double flat_height = 1e-12;
  static constexpr double metric_triangle = 1e-9;
  static constexpr double negative_type_rel = 1e-8;
  static constexpr double lp_pivot = 1e-9;
  static constexpr double lp_primal_feas = 1e-9;
  static constexpr double lp_optimality = 1e-9;
  static constexpr double sdp_residual = 1e-6;
  static constexpr int sdp_max_iterations = 50000;
  static constexpr int trace_refinements = 10;
  static constexpr int trace_steps_per_radius = 512;
};

}  // namespace heislab::core
