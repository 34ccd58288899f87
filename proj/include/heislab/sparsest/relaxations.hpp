#pragma once

#include <Eigen/Core>
#include <map>
#include <optional>
#include <string>

#include "heislab/sparsest/instance.hpp"
#include "json.hpp"

namespace heislab::sparsest {

struct RelaxationResult {
  std::string relaxation;  // exact, l1, met, neg
  double value = 0.0;
  /// Minimizing cut (exact) in canonical form, vertex 0 outside.
  std::optional<std::uint64_t> cut;
  /// Optimal pseudometric with Σ D·d = 1 (l1, met, neg).
  std::optional<Eigen::MatrixXd> metric;
  /// Centered Gram matrix with d(i,j) = |x_i - x_j|^2 (neg).
  std::optional<Eigen::MatrixXd> gram;
  long iterations = 0;
  std::map<std::string, double> residuals;

  /// Result file layout; the optimizer is the hex cut or the metric rows.
  nlohmann::json to_json(std::optional<std::uint64_t> seed = std::nullopt) const;
};

/// Enumeration of the 2^{n-1}-1 cuts in Gray-code order. Cuts that separate
/// no demand are skipped. Throws explicit_limit for n > 24 and
/// no_separated_demand when every cut is skipped.
RelaxationResult phi_exact(const SparsestCutInstance& inst);

/// LP over the cut cone with Σ D·d = 1. n <= 16.
RelaxationResult phi_l1(const SparsestCutInstance& inst);

/// LP over the metric polytope with Σ D·d = 1, by triangle-row generation
/// on top of the revised simplex. n <= 40.
RelaxationResult phi_met(const SparsestCutInstance& inst);

/// The dual of the metric LP with every triangle row explicit
/// (max z s.t. z D_p + Σ_t μ_t A_t(p) <= c_p, μ >= 0). n <= 12.
RelaxationResult phi_met_dual(const SparsestCutInstance& inst);

struct NegOptions {
  double primal_tol = 1e-6;
  double dual_tol = 1e-6;
  long max_iterations = 50'000;
  double rho = 1.0;
  double sigma = 1e-6;
  double relaxation = 1.6;
  int adapt_every = 100;
};

/// Negative-type relaxation by ADMM: the affine row Σ D·d = 1, the triangle
/// rows and the PSD block -Q^T d Q (Q an orthonormal basis of the zero-sum
/// vectors) are projected separately; the d-step solves one fixed
/// factorized system. Throws nonconverged when the cap is hit. n <= 20.
RelaxationResult phi_neg(const SparsestCutInstance& inst, const NegOptions& options = {});

/// Lower bounds for the negative-type relaxation by Kelley cuts: the metric
/// LP plus c^T d c <= 0 for violating zero-sum eigenvectors c, until the
/// largest violation is below tol * ||d||_F. value is the final LP bound.
RelaxationResult phi_neg_cutting_plane(const SparsestCutInstance& inst, double tol = 1e-9, int max_rounds = 2000);

}  // namespace heislab::sparsest
