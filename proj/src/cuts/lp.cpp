#include "heislab/cuts/lp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

#include "heislab/error.hpp"

namespace heislab::cuts {

int LinearProgram::add_column(double cost, double lo, double hi) {
  objective.push_back(cost);
  lower.push_back(lo);
  upper.push_back(hi);
  return num_cols++;
}

int LinearProgram::add_row(RowSense sense, double value) {
  senses.push_back(sense);
  rhs.push_back(value);
  return num_rows++;
}

void LinearProgram::validate() const {
  auto bad = [](const std::string& msg) { throw Error(ErrorCode::invalid_argument, "linear program: " + msg); };
  if (num_rows < 0 || num_cols < 0) bad("negative dimensions");
  if (objective.size() != static_cast<std::size_t>(num_cols) || lower.size() != objective.size() ||
      upper.size() != objective.size()) {
    bad("column arrays do not match num_cols");
  }
  if (senses.size() != static_cast<std::size_t>(num_rows) || rhs.size() != senses.size()) {
    bad("row arrays do not match num_rows");
  }
  for (int j = 0; j < num_cols; ++j) {
    if (!std::isfinite(objective[j])) bad("non-finite objective");
    if (std::isnan(lower[j]) || std::isnan(upper[j]) || lower[j] > upper[j]) bad("bad column bounds");
    if (lower[j] == inf || upper[j] == -inf) bad("bad column bounds");
  }
  for (double b : rhs) {
    if (!std::isfinite(b)) bad("non-finite rhs");
  }
  for (const auto& t : entries) {
    if (t.row < 0 || t.row >= num_rows || t.col < 0 || t.col >= num_cols) bad("entry out of range");
    if (!std::isfinite(t.value)) bad("non-finite entry");
  }
}

const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "OPTIMAL";
    case LpStatus::infeasible: return "INFEASIBLE";
    case LpStatus::unbounded: return "UNBOUNDED";
    case LpStatus::iteration_limit: return "ITERATION_LIMIT";
  }
  return "?";
}

namespace {

constexpr double inf = LinearProgram::inf;

struct Column {
  std::vector<int> rows;
  std::vector<double> values;
};

enum class State { basic, lower, upper, zero };

class Simplex {
 public:
  Simplex(const LinearProgram& lp, const LpOptions& opt) : lp_(lp), opt_(opt), m_(lp.num_rows) {
    const int n = lp.num_cols;
    cols_.resize(static_cast<std::size_t>(n + m_));
    for (const auto& t : lp.entries) {
      if (t.value == 0.0) continue;
      cols_[t.col].rows.push_back(t.row);
      cols_[t.col].values.push_back(t.value);
    }
    lo_ = lp.lower;
    hi_ = lp.upper;
    for (int i = 0; i < m_; ++i) {
      cols_[n + i] = {{i}, {1.0}};
      switch (lp.senses[i]) {
        case RowSense::le: lo_.push_back(0.0), hi_.push_back(inf); break;
        case RowSense::ge: lo_.push_back(-inf), hi_.push_back(0.0); break;
        case RowSense::eq: lo_.push_back(0.0), hi_.push_back(0.0); break;
      }
    }
    num_struct_ = n;
  }

  LpResult run() {
    LpResult out;
    start_basis();
    // Phase 1: minimize the sum of artificials.
    cost_.assign(cols_.size(), 0.0);
    for (std::size_t j = first_artificial_; j < cols_.size(); ++j) cost_[j] = 1.0;
    LpStatus s1 = phase(out);
    out.phase1_objective = 0.0;
    for (std::size_t j = first_artificial_; j < cols_.size(); ++j) out.phase1_objective += x_[j];
    double bscale = 1.0;
    for (double b : lp_.rhs) bscale = std::max(bscale, std::abs(b));
    if (s1 == LpStatus::iteration_limit) return finish(out, s1);
    if (out.phase1_objective > opt_.feasibility_tol * bscale) {
      out.farkas = duals();
      return finish(out, LpStatus::infeasible);
    }
    // Phase 2: artificials are fixed at zero.
    for (std::size_t j = first_artificial_; j < cols_.size(); ++j) {
      hi_[j] = hi0_[j] = 0.0;
      if (state_[j] != State::basic) x_[j] = 0.0, state_[j] = State::lower;
    }
    cost_.assign(cols_.size(), 0.0);
    for (int j = 0; j < num_struct_; ++j) cost_[j] = lp_.objective[j];
    return finish(out, phase(out));
  }

 private:
  // Primal simplex on randomly shifted bounds, then the shifts are removed
  // and the basis repaired by dual simplex before a final unshifted pass.
  LpStatus phase(LpResult& out) {
    allow_shift_ = true;
    shift_basics();
    LpStatus s = iterate(out);
    allow_shift_ = false;
    if (shifted_any_) {
      unshift();
      if (s == LpStatus::optimal) s = dual_cleanup(out);
      if (s == LpStatus::optimal) s = iterate(out);
    }
    return s;
  }

  // Relaxes the bounds of basic variables by small random amounts. Returns
  // whether anything changed.
  bool shift_basics() {
    std::uniform_real_distribution<double> u(0.5, 1.0);
    bool changed = false;
    for (int v : basis_) {
      if (shifted_[v]) continue;
      shifted_[v] = true;
      if (std::isfinite(lo0_[v])) lo_[v] = lo0_[v] - u(rng_) * shift_scale * std::max(1.0, std::abs(lo0_[v]));
      if (std::isfinite(hi0_[v])) hi_[v] = hi0_[v] + u(rng_) * shift_scale * std::max(1.0, std::abs(hi0_[v]));
      changed = true;
    }
    shifted_any_ = shifted_any_ || changed;
    return changed;
  }

  void unshift() {
    lo_ = lo0_;
    hi_ = hi0_;
    for (std::size_t j = 0; j < x_.size(); ++j) {
      if (state_[j] == State::lower) x_[j] = lo_[j];
      if (state_[j] == State::upper) x_[j] = hi_[j];
    }
    shifted_.assign(x_.size(), false);
    shifted_any_ = false;
    refactor();
  }

  // Dual simplex from a dual-feasible basis until the basic values respect
  // their bounds.
  LpStatus dual_cleanup(LpResult& out) {
    for (;;) {
      if (out.iterations >= opt_.max_iterations) return LpStatus::iteration_limit;
      if (since_refactor_ >= opt_.refactor_every) refactor();
      int r = -1;
      double worst = opt_.feasibility_tol, delta = 0.0;
      for (int i = 0; i < m_; ++i) {
        int v = basis_[i];
        double below = lo_[v] - x_[v], above = x_[v] - hi_[v];
        if (below > worst) worst = below, r = i, delta = below;
        if (above > worst) worst = above, r = i, delta = -above;
      }
      if (r < 0) return LpStatus::optimal;
      auto y = duals();
      Eigen::RowVectorXd rho = binv_.row(r);
      std::size_t q = cols_.size();
      double best_ratio = inf, best_alpha = 0.0;
      for (std::size_t j = 0; j < cols_.size(); ++j) {
        if (state_[j] == State::basic || lo_[j] == hi_[j]) continue;
        double alpha = 0.0;
        for (std::size_t k = 0; k < cols_[j].rows.size(); ++k) alpha += rho(cols_[j].rows[k]) * cols_[j].values[k];
        if (std::abs(alpha) <= opt_.pivot_tol) continue;
        // x_B(r) moves by -alpha per unit increase of x_j.
        const double t = -delta / alpha;
        if ((state_[j] == State::lower && t <= 0.0) || (state_[j] == State::upper && t >= 0.0)) continue;
        const double ratio = std::abs(reduced_cost(j, y)) / std::abs(alpha);
        if (ratio < best_ratio - 1e-12 || (ratio <= best_ratio + 1e-12 && std::abs(alpha) > std::abs(best_alpha))) {
          best_ratio = ratio, best_alpha = alpha, q = j;
        }
      }
      if (q == cols_.size()) return LpStatus::infeasible;
      Eigen::VectorXd aq = Eigen::VectorXd::Zero(m_);
      for (std::size_t k = 0; k < cols_[q].rows.size(); ++k) aq += binv_.col(cols_[q].rows[k]) * cols_[q].values[k];
      const double t = -delta / aq(r);
      for (int i = 0; i < m_; ++i) x_[basis_[i]] -= t * aq(i);
      x_[q] += t;
      int v = basis_[r];
      if (delta > 0.0) {
        x_[v] = lo_[v], state_[v] = State::lower;
      } else {
        x_[v] = hi_[v], state_[v] = State::upper;
      }
      pivot(r, static_cast<int>(q), aq);
      ++out.iterations;
    }
  }

  void pivot(int leave, int q, const Eigen::VectorXd& aq) {
    basis_[leave] = q;
    state_[q] = State::basic;
    // Product-form update of B^{-1}.
    const double p = aq(leave);
    Eigen::RowVectorXd row = binv_.row(leave) / p;
    for (int i = 0; i < m_; ++i) {
      if (i != leave && aq(i) != 0.0) binv_.row(i) -= aq(i) * row;
    }
    binv_.row(leave) = row;
    ++since_refactor_;
  }

  void start_basis() {
    const int n = num_struct_;
    x_.assign(static_cast<std::size_t>(n + m_), 0.0);
    state_.assign(x_.size(), State::lower);
    std::vector<double> resid = lp_.rhs;
    for (int j = 0; j < n; ++j) {
      if (std::isfinite(lo_[j])) {
        x_[j] = lo_[j], state_[j] = State::lower;
      } else if (std::isfinite(hi_[j])) {
        x_[j] = hi_[j], state_[j] = State::upper;
      } else {
        x_[j] = 0.0, state_[j] = State::zero;
      }
      for (std::size_t k = 0; k < cols_[j].rows.size(); ++k) resid[cols_[j].rows[k]] -= cols_[j].values[k] * x_[j];
    }
    basis_.assign(static_cast<std::size_t>(m_), -1);
    first_artificial_ = x_.size();
    for (int i = 0; i < m_; ++i) {
      int s = n + i;
      double v = resid[i];
      double clamped = std::clamp(v, lo_[s], hi_[s]);
      if (std::abs(v - clamped) <= opt_.feasibility_tol) {
        x_[s] = v;
        state_[s] = State::basic;
        basis_[i] = s;
        continue;
      }
      x_[s] = clamped;
      state_[s] = clamped == lo_[s] ? State::lower : State::upper;
      double a = v - clamped;
      cols_.push_back({{i}, {a > 0 ? 1.0 : -1.0}});
      lo_.push_back(0.0);
      hi_.push_back(inf);
      x_.push_back(std::abs(a));
      state_.push_back(State::basic);
      basis_[i] = static_cast<int>(cols_.size()) - 1;
    }
    lo0_ = lo_;
    hi0_ = hi_;
    shifted_.assign(x_.size(), false);
    refactor();
  }

  // Dense B^{-1} from the basis columns by LU, and basic values from scratch.
  void refactor() {
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(m_, m_);
    for (int i = 0; i < m_; ++i) {
      const auto& c = cols_[basis_[i]];
      for (std::size_t k = 0; k < c.rows.size(); ++k) b(c.rows[k], i) = c.values[k];
    }
    binv_ = m_ > 0 ? Eigen::MatrixXd(b.partialPivLu().inverse()) : Eigen::MatrixXd();
    Eigen::VectorXd r = Eigen::Map<const Eigen::VectorXd>(lp_.rhs.data(), m_);
    for (std::size_t j = 0; j < cols_.size(); ++j) {
      if (state_[j] == State::basic || x_[j] == 0.0) continue;
      for (std::size_t k = 0; k < cols_[j].rows.size(); ++k) r(cols_[j].rows[k]) -= cols_[j].values[k] * x_[j];
    }
    Eigen::VectorXd xb = binv_ * r;
    for (int i = 0; i < m_; ++i) x_[basis_[i]] = xb(i);
    since_refactor_ = 0;
    rejected_.assign(cols_.size(), false);
  }

  std::vector<double> duals() const {
    Eigen::VectorXd cb(m_);
    for (int i = 0; i < m_; ++i) cb(i) = cost_[basis_[i]];
    Eigen::VectorXd y = binv_.transpose() * cb;
    return {y.data(), y.data() + m_};
  }

  double reduced_cost(std::size_t j, const std::vector<double>& y) const {
    double d = cost_[j];
    for (std::size_t k = 0; k < cols_[j].rows.size(); ++k) d -= y[cols_[j].rows[k]] * cols_[j].values[k];
    return d;
  }

  LpStatus iterate(LpResult& out) {
    int degenerate = 0;
    bool accept_small = false;
    for (;;) {
      if (out.iterations >= opt_.max_iterations) return LpStatus::iteration_limit;
      if (since_refactor_ >= opt_.refactor_every) refactor();
      if (degenerate >= opt_.degenerate_before_bland && allow_shift_ && shift_basics()) degenerate = 0;
      const bool bland = degenerate >= opt_.degenerate_before_bland;
      auto y = duals();

      // Pricing.
      std::size_t q = cols_.size();
      double best = 0.0, dq = 0.0;
      bool skipped = false;
      for (std::size_t j = 0; j < cols_.size(); ++j) {
        if (state_[j] == State::basic || lo_[j] == hi_[j]) continue;
        double d = reduced_cost(j, y);
        bool eligible = (state_[j] == State::lower && d < -opt_.optimality_tol) ||
                        (state_[j] == State::upper && d > opt_.optimality_tol) ||
                        (state_[j] == State::zero && std::abs(d) > opt_.optimality_tol);
        if (!eligible) continue;
        if (rejected_[j]) {
          skipped = true;
          continue;
        }
        if (bland) {
          q = j, dq = d;
          break;
        }
        if (std::abs(d) > best) best = std::abs(d), q = j, dq = d;
      }
      if (q == cols_.size()) {
        if (!skipped) return LpStatus::optimal;
        // Only rejected candidates remain: refactor, or accept small pivots
        // once the factorization is fresh.
        if (since_refactor_ > 0) {
          refactor();
        } else {
          accept_small = true;
          std::fill(rejected_.begin(), rejected_.end(), false);
        }
        continue;
      }

      // Column of the entering variable in the current basis.
      Eigen::VectorXd aq = Eigen::VectorXd::Zero(m_);
      for (std::size_t k = 0; k < cols_[q].rows.size(); ++k) aq += binv_.col(cols_[q].rows[k]) * cols_[q].values[k];
      const double sigma = dq < 0.0 ? 1.0 : -1.0;

      // Ratio test (two passes: relaxed bound, then the largest pivot among
      // the candidates; Bland mode takes the smallest variable index).
      double theta_max = hi_[q] - lo_[q];
      auto limit = [&](int i, double relax) {
        double rate = -sigma * aq(i);  // d x_B(i) / d theta
        int v = basis_[i];
        if (rate < -opt_.pivot_tol && std::isfinite(lo_[v])) return (x_[v] - lo_[v] + relax) / -rate;
        if (rate > opt_.pivot_tol && std::isfinite(hi_[v])) return (hi_[v] - x_[v] + relax) / rate;
        return inf;
      };
      int leave = -1;
      if (bland) {
        // Exact minimum ratio, ties to the smallest variable index.
        double tmin = theta_max;
        for (int i = 0; i < m_; ++i) tmin = std::min(tmin, std::max(0.0, limit(i, 0.0)));
        if (!std::isfinite(tmin)) return LpStatus::unbounded;
        const double tie = 1e-12 * (1.0 + tmin);
        for (int i = 0; i < m_; ++i) {
          double t = limit(i, 0.0);
          if (!std::isfinite(t) || std::max(0.0, t) > tmin + tie) continue;
          if (leave < 0 || basis_[i] < basis_[leave]) leave = i;
        }
      } else {
        double relaxed = theta_max;
        for (int i = 0; i < m_; ++i) relaxed = std::min(relaxed, limit(i, opt_.feasibility_tol));
        if (!std::isfinite(relaxed)) return LpStatus::unbounded;
        double pivot = 0.0;
        for (int i = 0; i < m_; ++i) {
          double t = limit(i, 0.0);
          if (t > relaxed) continue;
          double mag = std::abs(aq(i));
          if (leave < 0 || mag > pivot) leave = i, pivot = mag;
        }
      }
      double theta;
      if (leave < 0 || theta_max <= limit(leave, 0.0)) {
        // Bound flip of the entering variable.
        theta = theta_max;
        leave = -1;
      } else {
        theta = std::max(0.0, limit(leave, 0.0));
        const double floor = std::max(opt_.pivot_tol, relative_pivot * aq.lpNorm<Eigen::Infinity>());
        if (!accept_small && std::abs(aq(leave)) < floor) {
          rejected_[q] = true;
          continue;
        }
      }
      accept_small = false;

      for (int i = 0; i < m_; ++i) x_[basis_[i]] -= sigma * theta * aq(i);
      x_[q] += sigma * theta;
      ++out.iterations;
      if (bland) ++out.bland_pivots;
      degenerate = theta <= 1e-12 ? degenerate + 1 : 0;

      if (leave < 0) {
        state_[q] = state_[q] == State::upper ? State::lower : State::upper;
        x_[q] = state_[q] == State::upper ? hi_[q] : lo_[q];
        continue;
      }
      int v = basis_[leave];
      double rate = -sigma * aq(leave);
      if (rate < 0.0) {
        x_[v] = lo_[v], state_[v] = State::lower;
      } else {
        x_[v] = hi_[v], state_[v] = State::upper;
      }
      pivot(leave, static_cast<int>(q), aq);
    }
  }

  LpResult finish(LpResult& out, LpStatus status) {
    refactor();
    out.status = status;
    out.x.assign(x_.begin(), x_.begin() + num_struct_);
    out.objective = 0.0;
    for (int j = 0; j < num_struct_; ++j) out.objective += lp_.objective[j] * out.x[j];
    // Residuals against the original rows and bounds.
    std::vector<double> act(static_cast<std::size_t>(m_), 0.0);
    for (int j = 0; j < num_struct_; ++j) {
      for (std::size_t k = 0; k < cols_[j].rows.size(); ++k) act[cols_[j].rows[k]] += cols_[j].values[k] * out.x[j];
      out.primal_residual = std::max({out.primal_residual, lp_.lower[j] - out.x[j], out.x[j] - lp_.upper[j]});
    }
    for (int i = 0; i < m_; ++i) {
      double r = act[i] - lp_.rhs[i];
      double viol = lp_.senses[i] == RowSense::le ? r : lp_.senses[i] == RowSense::ge ? -r : std::abs(r);
      out.primal_residual = std::max(out.primal_residual, viol);
    }
    if (status == LpStatus::optimal) {
      out.duals = duals();
      out.reduced_costs.resize(static_cast<std::size_t>(num_struct_));
      // Weak duality: y^T b + sum_j min over [lo_j, hi_j] of d_j x_j, over
      // structurals and slacks.
      double dual = 0.0;
      for (int i = 0; i < m_; ++i) dual += out.duals[i] * lp_.rhs[i];
      for (int j = 0; j < num_struct_ + m_; ++j) {
        double d = reduced_cost(static_cast<std::size_t>(j), out.duals);
        if (j < num_struct_) out.reduced_costs[j] = d;
        double bound = d > 0.0 ? lo_[j] : hi_[j];
        if (d == 0.0) continue;
        if (!std::isfinite(bound)) {
          out.dual_residual = std::max(out.dual_residual, std::abs(d));
          continue;
        }
        dual += d * bound;
      }
      out.dual_objective = dual;
    }
    return out;
  }

  const LinearProgram& lp_;
  const LpOptions& opt_;
  int m_;
  int num_struct_ = 0;
  std::size_t first_artificial_ = 0;
  std::vector<Column> cols_;
  std::vector<double> lo_, hi_, x_, cost_;
  std::vector<State> state_;
  std::vector<int> basis_;
  Eigen::MatrixXd binv_;
  int since_refactor_ = 0;
  // Unshifted bounds and the shift bookkeeping.
  static constexpr double shift_scale = 1e-7;
  // Pivots below this fraction of the entering column are refused; the
  // column is skipped until the next refactorization.
  static constexpr double relative_pivot = 1e-8;
  std::vector<bool> rejected_;
  std::vector<double> lo0_, hi0_;
  std::vector<bool> shifted_;
  bool shifted_any_ = false;
  bool allow_shift_ = false;
  std::mt19937_64 rng_{0x2545f4914f6cdd1dULL};
};

}  // namespace

LpResult solve(const LinearProgram& lp, const LpOptions& options) {
  lp.validate();
  Simplex s(lp, options);
  return s.run();
}

}  // namespace heislab::cuts
