#pragma once

#include <cstdint>
#include <vector>

#include "heislab/core/point.hpp"
#include "heislab/cuts/metric.hpp"
#include "heislab/sparsest/instance.hpp"

namespace heislab::sparsest {

struct DualityInstance {
  SparsestCutInstance instance;
  /// phi_l1(instance) / Φ(c, D, d2).
  double reported_gap = 1.0;
  /// d2 already in the cut cone; the instance is a single unit edge/demand.
  bool trivial = false;
  double c1 = 1.0;
  double phi_l1 = 1.0;
  double phi_d2 = 1.0;
  /// Functional on pairs (pair_index order), nonnegative on every cut
  /// metric, with capacities ℓ⁺ and demands ℓ⁻.
  std::vector<double> functional;
};

/// Capacities and demands from the optimal duals of the sandwich LP of
/// l1_distortion(d2). Throws like l1_distortion.
DualityInstance duality_instance(const cuts::FiniteMetric& d2);

struct HeisenbergInstance {
  std::vector<core::GridPoint> points;
  cuts::FiniteMetric d2;
};

/// k distinct points drawn uniformly from {0..n}^3 with rho distances.
/// Throws invalid_argument for k > (n+1)^3, k > 16, k < 2 or n < 1, and
/// logic_error if the sample fails the negative-type check.
HeisenbergInstance heisenberg_instance(int n, int k, std::uint64_t seed);

}  // namespace heislab::sparsest
