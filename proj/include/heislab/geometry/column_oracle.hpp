#pragma once

#include <functional>
#include <vector>

#include "heislab/core/halfspace.hpp"

namespace heislab::geometry {

/// Deterministic reference for symmetric differences of a subgraph
/// {ξ_c <= f(ξ_a, ξ_b)} against half-spaces inside the unit ball B_1(e).
/// The ball is integrated column by column: over (ξ_a, ξ_b) each vertical
/// fiber of B_1(e) is an exact interval [-Z, Z] from the closed-form unit
/// sphere, so only the horizontal directions are discretized (midpoint rule
/// on an n x n grid of [-1,1]^2).
class ColumnOracle {
 public:
  explicit ColumnOracle(int n);

  int resolution() const { return n_; }
  double ball_volume() const { return volume_; }

  /// Fraction of B_1(e) in {ξ_c <= f} △ {n·ξ <= o}.
  double symdiff(const std::function<double(double, double)>& f, const core::Vec3& normal,
                 double offset) const;

  struct Fit {
    core::Vec3 normal;
    double offset = 0.0;
    double symdiff = 0.0;
  };

  /// Local minimum of `symdiff` over planes by a pattern search on
  /// (normal, offset) from the given start.
  Fit minimize(const std::function<double(double, double)>& f, const core::Vec3& normal,
               double offset) const;

 private:
  int n_;
  double h_;
  std::vector<double> half_height_;  // Z per column, row-major
  double volume_ = 0.0;
};

/// Half height of the unit CC ball over horizontal radius rho <= 1: the
/// sphere is (2 sin(φ/2)/φ, (φ - sin φ)/φ²) for φ in [0, 2π].
double unit_ball_half_height(double rho);

/// The bilinear set {z <= xy, y > 0} seen from B_r((0,b,0)) in the
/// normalized frame: ξ_c <= 2 b ξ_a / r + ξ_a ξ_b (valid for r < b).
std::function<double(double, double)> bilinear_local_graph(double r, double b = 1.0);

}  // namespace heislab::geometry
