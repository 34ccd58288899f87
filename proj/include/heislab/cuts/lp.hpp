#pragma once

#include <limits>
#include <string>
#include <vector>

namespace heislab::cuts {

enum class RowSense { le, ge, eq };

struct Triplet {
  int row;
  int col;
  double value;
};

/// min c^T x  s.t.  row_i(x) (<=, >=, =) rhs_i,  lower <= x <= upper.
struct LinearProgram {
  static constexpr double inf = std::numeric_limits<double>::infinity();

  int num_rows = 0;
  int num_cols = 0;
  std::vector<double> objective;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<RowSense> senses;
  std::vector<double> rhs;
  std::vector<Triplet> entries;

  int add_column(double cost, double lo = 0.0, double hi = inf);
  int add_row(RowSense sense, double rhs);
  void set(int row, int col, double value) { entries.push_back({row, col, value}); }

  /// Throws invalid_argument on inconsistent sizes, out-of-range indices,
  /// non-finite data or lower > upper.
  void validate() const;
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

const char* to_string(LpStatus s);

struct LpOptions {
  double pivot_tol = 1e-9;
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  int refactor_every = 64;
  long max_iterations = 1'000'000;
  /// Consecutive degenerate pivots before switching from Dantzig pricing to
  /// Bland's rule (until the next nondegenerate pivot).
  int degenerate_before_bland = 50;
};

struct LpResult {
  LpStatus status = LpStatus::iteration_limit;
  /// c^T x recomputed from x.
  double objective = 0.0;
  /// Weak-duality bound from the final row duals and the bounds; equals the
  /// objective at a verified optimum.
  double dual_objective = 0.0;
  std::vector<double> x;
  /// Row duals y: d objective / d rhs.
  std::vector<double> duals;
  std::vector<double> reduced_costs;
  /// When infeasible: row multipliers y of the phase-1 optimum. With
  /// r = rhs - (row activity at the phase-1 point), y^T r > 0 certifies
  /// infeasibility for equality rows with nonnegative columns.
  std::vector<double> farkas;
  double phase1_objective = 0.0;
  long iterations = 0;
  long bland_pivots = 0;
  /// max violation of rows and bounds by x.
  double primal_residual = 0.0;
  /// max violation of reduced-cost sign conditions.
  double dual_residual = 0.0;
};

/// Bounded revised simplex: slack basis with artificials, phase 1 on the
/// sum of artificials, phase 2 on the objective. The basis inverse is kept
/// dense with product-form updates and rebuilt by LU every
/// `refactor_every` pivots.
LpResult solve(const LinearProgram& lp, const LpOptions& options = {});

}  // namespace heislab::cuts
