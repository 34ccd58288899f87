#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "json.hpp"

namespace heislab::sparsest {

struct Edge {
  int u = 0;
  int v = 0;
  double cap = 0.0;
};

struct Demand {
  int u = 0;
  int v = 0;
  double w = 0.0;
};

/// Graph with positive capacities and nonnegative demands on vertices 0..n-1.
class SparsestCutInstance {
 public:
  /// Throws invalid_argument on u == v, an endpoint out of range, a
  /// non-positive or non-finite capacity, a negative demand, or when no
  /// demand is positive.
  SparsestCutInstance(int n, std::vector<Edge> edges, std::vector<Demand> demands);

  int n() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Demand>& demands() const { return demands_; }

  /// Symmetric matrices with repeated pairs summed.
  const Eigen::MatrixXd& capacity() const { return cap_; }
  const Eigen::MatrixXd& demand() const { return dem_; }

  /// {"n":..,"edges":[{"u","v","cap"}],"demands":[{"u","v","w"}]}
  nlohmann::json to_json() const;
  static SparsestCutInstance from_json(const nlohmann::json& j);
  static SparsestCutInstance read(const std::filesystem::path& path);

 private:
  int n_;
  std::vector<Edge> edges_;
  std::vector<Demand> demands_;
  Eigen::MatrixXd cap_;
  Eigen::MatrixXd dem_;
};

/// Σ c·d and Σ D·d over unordered pairs for a symmetric d.
double capacity_sum(const SparsestCutInstance& inst, const Eigen::MatrixXd& d);
double demand_sum(const SparsestCutInstance& inst, const Eigen::MatrixXd& d);

/// Φ(c, D, d); +inf when the demand sum vanishes.
double phi_of(const SparsestCutInstance& inst, const Eigen::MatrixXd& d);

/// Seeded random instance: each pair is an edge with probability p_edge
/// (capacity uniform in [0.1, 1]) and carries demand with probability
/// p_demand (uniform in [0.1, 1]); at least one demand is forced.
SparsestCutInstance random_instance(int n, std::uint64_t seed, double p_edge = 0.5, double p_demand = 0.5);

}  // namespace heislab::sparsest
