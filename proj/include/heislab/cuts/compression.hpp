#pragma once

#include <map>
#include <vector>

#include "heislab/core/point.hpp"
#include "json.hpp"

namespace heislab::cuts {

using core::GridPoint;

/// A map from grid points into L1 (finite vectors with the l1 norm).
using GridMap = std::map<GridPoint, std::vector<double>>;

/// JSON list of {"point":[a,b,c],"image":[...]}.
GridMap read_grid_map(const nlohmann::json& j);
nlohmann::json to_json(const GridMap& f);

double l1_norm_diff(const std::vector<double>& x, const std::vector<double>& y);

struct CompressionTable {
  /// omega[t-1] = min ||f(x)-f(y)||_1 over pairs with d_T(x,y) >= t, t = 1..max.
  std::vector<double> omega;
  double lipschitz = 0.0;
  int max_distance = 0;
  std::size_t pairs = 0;
};

/// Points must lie in the word ball of `radius`; f must be defined on all.
/// Throws invalid_argument on an empty point set or a point outside the ball.
CompressionTable compression_rate(const std::vector<GridPoint>& points, const GridMap& f, int radius);

struct CollapseRow {
  int scale = 0;
  std::size_t pairs = 0;
  std::size_t collapsed = 0;
  double fraction = 0.0;
  double std_error = 0.0;  // binomial
};

/// For s = 1..radius, pairs with x1^{-1} x2 central and d_T in [s, 2s]: the
/// fraction with ||Δf||_1 / d_T <= threshold. Scales without pairs report NaN.
std::vector<CollapseRow> collapse_scan(const std::vector<GridPoint>& points, const GridMap& f,
                                       int radius, double threshold);

}  // namespace heislab::cuts
