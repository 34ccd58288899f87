#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "heislab/cuts/lp.hpp"
#include "heislab/cuts/metric.hpp"

namespace heislab::cuts {

/// Largest number of points for the exhaustive cut basis.
inline constexpr int max_cut_points = 16;

struct NegativeTypeResult {
  /// Largest eigenvalue of d on the zero-sum subspace.
  double max_eigenvalue = 0.0;
  /// Threshold 1e-8 * ||d||_F.
  double threshold = 0.0;
  bool negative_type = true;
  /// Zero-sum c with c^T d c > 0 when not of negative type.
  std::optional<Eigen::VectorXd> certificate;
};

/// Accepts any symmetric matrix with zero diagonal (squared Euclidean
/// distances are not metrics but are of negative type).
NegativeTypeResult negative_type_check(const Eigen::MatrixXd& d);
inline NegativeTypeResult negative_type_check(const FiniteMetric& d) {
  return negative_type_check(d.matrix());
}

struct ConeMembership {
  bool feasible = false;
  /// d = cut_metric(witness) when feasible.
  std::optional<CutMeasure> witness;
  /// When infeasible: functional on pairs with ℓ(d_S) <= 0 for every cut S
  /// and ℓ(d) > 0; ℓ(x) = Σ_p ℓ_p x_p over pairs in pair_index order.
  std::vector<double> certificate;
  LpResult lp;
};

/// LP feasibility of d = Σ λ_S d_S, λ >= 0. Throws explicit_limit for n > 16.
ConeMembership l1_cone_membership(const FiniteMetric& d);

struct Distortion {
  double c1 = 1.0;
  /// Lower bound from the LP dual; equals c1 at optimum.
  double dual_bound = 1.0;
  /// d <= cut_metric(witness) <= c1 * d.
  CutMeasure witness{2};
  /// Sandwich-LP row duals: alpha for d_p <= Σ λ_S d_S(p), beta for
  /// Σ λ_S d_S(p) <= D d_p (both nonnegative, in pair order).
  std::vector<double> alpha;
  std::vector<double> beta;
  LpResult lp;
};

/// min D s.t. d <= Σ λ_S d_S <= D d, λ >= 0. Throws explicit_limit for n > 16
/// and invalid_argument when two distinct points are at distance 0.
Distortion l1_distortion(const FiniteMetric& d);

/// Cut-pair incidence: entry (p, k) = d_{cuts[k]}(pair p).
Eigen::MatrixXd cut_matrix(int n, const std::vector<std::uint64_t>& cuts);

}  // namespace heislab::cuts
