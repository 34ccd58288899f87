#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace heislab::cuts {

/// Finite metric space on points 0..n-1. Construction validates symmetry,
/// zero diagonal, nonnegativity and the triangle inequality (1e-9 relative
/// to the largest entry).
class FiniteMetric {
 public:
  explicit FiniteMetric(Eigen::MatrixXd d);

  int size() const { return static_cast<int>(d_.rows()); }
  double operator()(int i, int j) const { return d_(i, j); }
  const Eigen::MatrixXd& matrix() const { return d_; }
  double max_entry() const { return d_.maxCoeff(); }

  /// Metric on the listed points, in the given order.
  FiniteMetric restrict_to(const std::vector<int>& points) const;
  FiniteMetric scaled(double alpha) const;

  /// Shortest-path metric of an unweighted connected graph.
  static FiniteMetric graph_metric(int n, const std::vector<std::pair<int, int>>& edges);

  /// CSV: first line n, then n rows of n numbers.
  static FiniteMetric read_csv(const std::filesystem::path& path);
  void write_csv(const std::filesystem::path& path) const;

 private:
  Eigen::MatrixXd d_;
};

/// Number of unordered pairs and the pair index of i < j.
inline int pair_count(int n) { return n * (n - 1) / 2; }
int pair_index(int n, int i, int j);

/// Nonnegative combination of elementary cut metrics d_S. Cuts are stored in
/// canonical form with point 0 outside S (d_S = d_{S^c}); S is a bitmask over
/// points 0..n-1.
class CutMeasure {
 public:
  struct Entry {
    std::uint64_t cut;
    double weight;
  };

  explicit CutMeasure(int n) : n_(n) { check_n(n); }

  int size() const { return n_; }
  const std::vector<Entry>& entries() const { return entries_; }

  /// Adds weight to the cut S (either side may be given). Throws on a
  /// trivial cut, a bit outside 0..n-1, or a non-positive or non-finite weight.
  void add(std::uint64_t cut, double weight);

  static std::uint64_t canonical(std::uint64_t cut, int n);

  /// JSON list of {"cut": "0x..", "w": ...}.
  nlohmann::json to_json() const;
  static CutMeasure from_json(const nlohmann::json& j, int n);

 private:
  static void check_n(int n);

  int n_;
  std::vector<Entry> entries_;
};

/// d(i,j) = total weight of cuts separating i and j.
FiniteMetric cut_metric(const CutMeasure& m);

/// All 2^{n-1} - 1 canonical cuts, in increasing bitmask order.
std::vector<std::uint64_t> all_cuts(int n);

}  // namespace heislab::cuts
