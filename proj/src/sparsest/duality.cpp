#include "heislab/sparsest/duality.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include "heislab/core/distance.hpp"
#include "heislab/cuts/l1.hpp"
#include "heislab/error.hpp"
#include "heislab/random.hpp"
#include "heislab/sparsest/relaxations.hpp"

namespace heislab::sparsest {

DualityInstance duality_instance(const cuts::FiniteMetric& d2) {
  const int n = d2.size();
  auto dist = cuts::l1_distortion(d2);
  DualityInstance out{SparsestCutInstance(std::max(n, 2), {{0, 1, 1.0}}, {{0, 1, 1.0}}), 1.0, false, 1.0, 1.0, 1.0, {}};
  out.c1 = dist.c1;
  if (dist.c1 <= 1.0 + 1e-7) {
    out.trivial = true;
    return out;
  }
  // ℓ = β - α is nonnegative on the cut cone and ℓ(d2) = 1 - c1 < 0 (d2
  // scaled to unit maximum).
  const int pairs = cuts::pair_count(n);
  out.functional.resize(pairs);
  double scale = 0.0;
  for (int p = 0; p < pairs; ++p) {
    out.functional[p] = dist.beta[p] - dist.alpha[p];
    scale = std::max(scale, std::abs(out.functional[p]));
  }
  std::vector<Edge> edges;
  std::vector<Demand> demands;
  for (int i = 0, p = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j, ++p) {
      const double l = out.functional[p];
      if (std::abs(l) <= 1e-12 * scale) continue;
      if (l > 0.0) {
        edges.push_back({i, j, l});
      } else {
        demands.push_back({i, j, -l});
      }
    }
  }
  out.instance = SparsestCutInstance(n, std::move(edges), std::move(demands));
  out.phi_d2 = phi_of(out.instance, d2.matrix());
  out.phi_l1 = phi_l1(out.instance).value;
  out.reported_gap = out.phi_l1 / out.phi_d2;
  if (out.phi_d2 > 1.0 / out.c1 + 1e-6 || out.phi_l1 < 1.0 - 1e-6) {
    throw Error(ErrorCode::nonconverged, "duality instance: dual functional fails its guarantees");
  }
  return out;
}

HeisenbergInstance heisenberg_instance(int n, int k, std::uint64_t seed) {
  if (n < 1) throw Error(ErrorCode::invalid_argument, "heisenberg_instance: n must be >= 1");
  const long side = n + 1;
  const long total = side * side * side;
  if (k < 2 || k > 16 || k > total) {
    throw Error(ErrorCode::invalid_argument, "heisenberg_instance: need 2 <= k <= min(16, (n+1)^3)");
  }
  CounterRng rng(seed, static_cast<std::uint64_t>(n) << 8 | static_cast<std::uint64_t>(k));
  std::set<long> chosen;
  std::vector<core::GridPoint> points;
  while (static_cast<int>(points.size()) < k) {
    const long idx = static_cast<long>(rng() % static_cast<std::uint64_t>(total));
    if (!chosen.insert(idx).second) continue;
    points.push_back({idx / (side * side), (idx / side) % side, idx % side});
  }
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      d(i, j) = d(j, i) = core::rho_distance(points[i].to_point(), points[j].to_point());
    }
  }
  if (!cuts::negative_type_check(d).negative_type) {
    throw std::logic_error("heisenberg_instance: rho sample is not of negative type");
  }
  return {std::move(points), cuts::FiniteMetric(d)};
}

}  // namespace heislab::sparsest
