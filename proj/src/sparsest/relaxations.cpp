#include "heislab/sparsest/relaxations.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SparseCore>
#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>

#include "heislab/cuts/l1.hpp"
#include "heislab/cuts/lp.hpp"
#include "heislab/error.hpp"

namespace heislab::sparsest {

using cuts::LinearProgram;
using cuts::LpStatus;
using cuts::RowSense;

nlohmann::json RelaxationResult::to_json(std::optional<std::uint64_t> seed) const {
  nlohmann::json j{{"relaxation", relaxation}, {"value", value}, {"iterations", iterations}};
  if (cut) {
    std::ostringstream hex;
    hex << "0x" << std::hex << *cut;
    j["optimizer"] = hex.str();
  } else if (metric) {
    auto rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < metric->rows(); ++i) {
      std::vector<double> row(metric->cols());
      for (Eigen::Index k = 0; k < metric->cols(); ++k) row[k] = (*metric)(i, k);
      rows.push_back(row);
    }
    j["optimizer"] = rows;
  } else {
    j["optimizer"] = nullptr;
  }
  j["residuals"] = residuals;
  j["seed"] = seed ? nlohmann::json(*seed) : nlohmann::json(nullptr);
  return j;
}

namespace {

void check_size(int n, int limit, const char* what) {
  if (n > limit) {
    throw Error(ErrorCode::explicit_limit,
                std::string(what) + " supports n <= " + std::to_string(limit) + ", got " + std::to_string(n));
  }
}

Eigen::MatrixXd cut_matrix_of(std::uint64_t cut, int n) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) d(i, j) = ((cut >> i) & 1u) != ((cut >> j) & 1u) ? 1.0 : 0.0;
  }
  return d;
}

struct Pairs {
  explicit Pairs(int n) : n(n), count(n * (n - 1) / 2) {}
  int index(int i, int j) const { return cuts::pair_index(n, i, j); }
  Eigen::VectorXd flatten(const Eigen::MatrixXd& w) const {
    Eigen::VectorXd v(count);
    for (int i = 0, p = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) v(p++) = w(i, j);
    }
    return v;
  }
  Eigen::MatrixXd matrix(const Eigen::VectorXd& v) const {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0, p = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j, ++p) d(i, j) = d(j, i) = v(p);
    }
    return d;
  }
  int n;
  int count;
};

// Triangle row d(i,j) - d(i,k) - d(k,j) <= 0, identified by (long pair, apex).
struct Triangle {
  int i, j, k;
};

double triangle_violation(const Eigen::MatrixXd& d, const Triangle& t) {
  return d(t.i, t.j) - d(t.i, t.k) - d(t.k, t.j);
}

std::vector<Triangle> all_triangles(int n) {
  std::vector<Triangle> out;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      for (int c = b + 1; c < n; ++c) {
        out.push_back({a, b, c});
        out.push_back({a, c, b});
        out.push_back({b, c, a});
      }
    }
  }
  return out;
}

double max_triangle_violation(const Eigen::MatrixXd& d) {
  double worst = 0.0;
  for (const auto& t : all_triangles(static_cast<int>(d.rows()))) worst = std::max(worst, triangle_violation(d, t));
  return worst;
}

// min Σ c·d over d >= 0 with Σ D·d = 1, the given triangle rows and extra
// dense rows (each <= 0).
struct MetricLp {
  const SparsestCutInstance& inst;
  Pairs pairs;
  std::vector<Triangle> triangles;
  std::vector<Eigen::VectorXd> extra;

  explicit MetricLp(const SparsestCutInstance& in) : inst(in), pairs(in.n()) {}

  cuts::LpResult solve(Eigen::MatrixXd& d) const {
    LinearProgram lp;
    const Eigen::VectorXd c = pairs.flatten(inst.capacity());
    const Eigen::VectorXd w = pairs.flatten(inst.demand());
    for (int p = 0; p < pairs.count; ++p) lp.add_column(c(p));
    int norm = lp.add_row(RowSense::eq, 1.0);
    for (int p = 0; p < pairs.count; ++p) {
      if (w(p) != 0.0) lp.set(norm, p, w(p));
    }
    for (const auto& t : triangles) {
      int r = lp.add_row(RowSense::le, 0.0);
      lp.set(r, pairs.index(t.i, t.j), 1.0);
      lp.set(r, pairs.index(t.i, t.k), -1.0);
      lp.set(r, pairs.index(t.k, t.j), -1.0);
    }
    for (const auto& row : extra) {
      int r = lp.add_row(RowSense::le, 0.0);
      for (int p = 0; p < pairs.count; ++p) {
        if (row(p) != 0.0) lp.set(r, p, row(p));
      }
    }
    auto res = cuts::solve(lp);
    if (res.status != LpStatus::optimal) {
      throw Error(ErrorCode::nonconverged, std::string("metric LP: ") + cuts::to_string(res.status));
    }
    d = pairs.matrix(Eigen::Map<const Eigen::VectorXd>(res.x.data(), pairs.count));
    return res;
  }

  // Adds the most violated missing triangles; returns how many were added.
  std::size_t add_violated(const Eigen::MatrixXd& d, double tol, std::size_t cap) {
    std::vector<std::pair<double, Triangle>> found;
    for (const auto& t : all_triangles(pairs.n)) {
      double v = triangle_violation(d, t);
      if (v > tol) found.push_back({v, t});
    }
    std::stable_sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    if (found.size() > cap) found.resize(cap);
    for (const auto& f : found) triangles.push_back(f.second);
    return found.size();
  }
};

void record_lp(RelaxationResult& out, const cuts::LpResult& lp) {
  out.iterations += lp.iterations;
  out.residuals["lp_primal"] = lp.primal_residual;
  out.residuals["lp_dual"] = lp.dual_residual;
  out.residuals["lp_gap"] = std::abs(lp.objective - lp.dual_objective);
}

}  // namespace

RelaxationResult phi_exact(const SparsestCutInstance& inst) {
  const int n = inst.n();
  check_size(n, 24, "phi_exact");
  const auto& cap = inst.capacity();
  const auto& dem = inst.demand();
  // Positive-demand adjacency, for an exact zero-separation test.
  std::vector<std::uint32_t> dem_adj(n, 0);
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (dem(u, v) > 0.0) dem_adj[u] |= 1u << v;
    }
  }
  auto exact = [&](std::uint32_t s, double& c, double& w) {
    c = w = 0.0;
    for (int u = 0; u < n; ++u) {
      if (!((s >> u) & 1u)) continue;
      for (int v = 0; v < n; ++v) {
        if (!((s >> v) & 1u)) c += cap(u, v), w += dem(u, v);
      }
    }
  };
  std::uint32_t s = 0;
  double c = 0.0, w = 0.0;
  long separated = 0;  // positive-demand pairs across the cut
  double best = std::numeric_limits<double>::infinity();
  std::uint32_t best_cut = 0;
  const std::uint64_t steps = (std::uint64_t{1} << (n - 1)) - 1;
  for (std::uint64_t i = 1; i <= steps; ++i) {
    const int v = std::countr_zero(i) + 1;
    const bool entering = !((s >> v) & 1u);
    for (int u = 0; u < n; ++u) {
      if (u == v) continue;
      const double sign = (((s >> u) & 1u) != 0) == entering ? -1.0 : 1.0;
      c += sign * cap(u, v);
      w += sign * dem(u, v);
    }
    const std::uint32_t in_s_before = s;
    s ^= 1u << v;
    const std::uint32_t others = dem_adj[v] & ~(1u << v);
    const long in_count = std::popcount(others & in_s_before);
    const long out_count = std::popcount(others) - in_count;
    separated += entering ? out_count - in_count : in_count - out_count;
    if ((i & 4095u) == 0) exact(s, c, w);
    if (separated == 0) continue;
    const double ratio = c / w;
    if (ratio < best) best = ratio, best_cut = s;
  }
  if (!std::isfinite(best)) {
    throw Error(ErrorCode::no_separated_demand, "no cut separates a positive demand");
  }
  RelaxationResult out;
  out.relaxation = "exact";
  exact(best_cut, c, w);
  out.value = c / w;
  out.cut = best_cut;
  out.iterations = static_cast<long>(steps);
  return out;
}

RelaxationResult phi_l1(const SparsestCutInstance& inst) {
  const int n = inst.n();
  check_size(n, cuts::max_cut_points, "phi_l1");
  const auto all = cuts::all_cuts(n);
  LinearProgram lp;
  const int norm = lp.add_row(RowSense::eq, 1.0);
  bool any = false;
  for (std::size_t k = 0; k < all.size(); ++k) {
    double c = 0.0, w = 0.0;
    for (int u = 0; u < n; ++u) {
      for (int v = u + 1; v < n; ++v) {
        if (((all[k] >> u) & 1u) != ((all[k] >> v) & 1u)) c += inst.capacity()(u, v), w += inst.demand()(u, v);
      }
    }
    int col = lp.add_column(c);
    if (w > 0.0) lp.set(norm, col, w), any = true;
  }
  if (!any) throw Error(ErrorCode::no_separated_demand, "no cut separates a positive demand");
  auto res = cuts::solve(lp);
  if (res.status != LpStatus::optimal) {
    throw Error(ErrorCode::nonconverged, std::string("cut-cone LP: ") + cuts::to_string(res.status));
  }
  RelaxationResult out;
  out.relaxation = "l1";
  out.value = res.objective;
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t k = 0; k < all.size(); ++k) {
    if (res.x[k] > 0.0) d += res.x[k] * cut_matrix_of(all[k], n);
  }
  out.metric = d;
  record_lp(out, res);
  return out;
}

RelaxationResult phi_met(const SparsestCutInstance& inst) {
  check_size(inst.n(), 40, "phi_met");
  MetricLp lp(inst);
  RelaxationResult out;
  out.relaxation = "met";
  Eigen::MatrixXd d;
  const std::size_t cap = std::max<std::size_t>(64, 2 * static_cast<std::size_t>(lp.pairs.count));
  for (int round = 0;; ++round) {
    auto res = lp.solve(d);
    record_lp(out, res);
    out.value = res.objective;
    const double tol = 1e-10 * std::max(1.0, d.maxCoeff());
    if (lp.add_violated(d, tol, cap) == 0) break;
    if (round > 10000) throw Error(ErrorCode::nonconverged, "metric LP row generation did not settle");
  }
  out.metric = d;
  out.residuals["triangle"] = std::max(0.0, max_triangle_violation(d));
  out.residuals["rows"] = static_cast<double>(lp.triangles.size());
  return out;
}

RelaxationResult phi_met_dual(const SparsestCutInstance& inst) {
  const int n = inst.n();
  check_size(n, 12, "phi_met_dual");
  Pairs pairs(n);
  const Eigen::VectorXd c = pairs.flatten(inst.capacity());
  const Eigen::VectorXd w = pairs.flatten(inst.demand());
  LinearProgram lp;
  const int z = lp.add_column(-1.0, -LinearProgram::inf, LinearProgram::inf);
  std::vector<int> rows(pairs.count);
  for (int p = 0; p < pairs.count; ++p) {
    rows[p] = lp.add_row(RowSense::le, c(p));
    if (w(p) != 0.0) lp.set(rows[p], z, w(p));
  }
  // Primal row d(i,k) + d(k,j) - d(i,j) >= 0 contributes its column here.
  for (const auto& t : all_triangles(n)) {
    int mu = lp.add_column(0.0);
    lp.set(rows[pairs.index(t.i, t.j)], mu, -1.0);
    lp.set(rows[pairs.index(t.i, t.k)], mu, 1.0);
    lp.set(rows[pairs.index(t.k, t.j)], mu, 1.0);
  }
  auto res = cuts::solve(lp);
  if (res.status != LpStatus::optimal) {
    throw Error(ErrorCode::nonconverged, std::string("metric dual LP: ") + cuts::to_string(res.status));
  }
  RelaxationResult out;
  out.relaxation = "met";
  out.value = res.x[z];
  Eigen::VectorXd d(pairs.count);
  for (int p = 0; p < pairs.count; ++p) d(p) = std::max(0.0, -res.duals[rows[p]]);
  out.metric = pairs.matrix(d);
  record_lp(out, res);
  return out;
}

namespace {

// svec of a symmetric matrix: upper triangle column by column, off-diagonal
// entries scaled by sqrt(2) so the Euclidean norm is the Frobenius norm.
int svec_size(int k) { return k * (k + 1) / 2; }

Eigen::VectorXd svec(const Eigen::MatrixXd& a) {
  const int k = static_cast<int>(a.rows());
  Eigen::VectorXd v(svec_size(k));
  for (int j = 0, p = 0; j < k; ++j) {
    for (int i = 0; i <= j; ++i) v(p++) = i == j ? a(i, j) : std::sqrt(2.0) * a(i, j);
  }
  return v;
}

Eigen::MatrixXd smat(const Eigen::VectorXd& v, int k) {
  Eigen::MatrixXd a(k, k);
  for (int j = 0, p = 0; j < k; ++j) {
    for (int i = 0; i <= j; ++i, ++p) a(i, j) = a(j, i) = i == j ? v(p) : v(p) / std::sqrt(2.0);
  }
  return a;
}

Eigen::MatrixXd project_psd(const Eigen::MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
  Eigen::VectorXd lam = eig.eigenvalues().cwiseMax(0.0);
  return eig.eigenvectors() * lam.asDiagonal() * eig.eigenvectors().transpose();
}

Eigen::MatrixXd zero_sum_basis(int n) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(Eigen::MatrixXd::Ones(n, 1));
  Eigen::MatrixXd q = qr.householderQ();
  return q.rightCols(n - 1);
}

}  // namespace

namespace {

// A capacity component whose boundary carries demand gives value 0, attained
// by its normalized cut metric.
std::optional<Eigen::MatrixXd> zero_capacity_cut(const SparsestCutInstance& inst) {
  const int n = inst.n();
  std::vector<int> comp(n, -1);
  for (int s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    std::vector<int> stack{s};
    comp[s] = s;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v = 0; v < n; ++v) {
        if (comp[v] < 0 && inst.capacity()(u, v) > 0.0) comp[v] = s, stack.push_back(v);
      }
    }
  }
  for (int s = 0; s < n; ++s) {
    if (comp[s] != s) continue;
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) d(i, j) = (comp[i] == s) != (comp[j] == s) ? 1.0 : 0.0;
    }
    const double w = demand_sum(inst, d);
    if (w > 0.0) return Eigen::MatrixXd(d / w);
  }
  return std::nullopt;
}

}  // namespace

RelaxationResult phi_neg(const SparsestCutInstance& inst, const NegOptions& opt) {
  const int n = inst.n();
  check_size(n, 20, "phi_neg");
  if (auto d = zero_capacity_cut(inst)) {
    RelaxationResult out;
    out.relaxation = "neg";
    out.value = 0.0;
    out.metric = *d;
    Eigen::MatrixXd j = Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd::Constant(n, n, 1.0 / n);
    out.gram = -0.5 * j * *d * j;
    out.residuals["primal"] = out.residuals["dual"] = 0.0;
    out.residuals["triangle"] = std::max(0.0, max_triangle_violation(*d));
    return out;
  }
  Pairs pairs(n);
  const auto tris = all_triangles(n);
  const int k = n - 1;
  const int m_psd = svec_size(k);
  const int m_tri = static_cast<int>(tris.size());
  const int m = 1 + m_tri + m_psd;
  const Eigen::MatrixXd q = zero_sum_basis(n);

  // Rows: normalization, triangles, svec(-Q^T d Q).
  std::vector<Eigen::Triplet<double>> trip;
  const Eigen::VectorXd demand = pairs.flatten(inst.demand());
  for (int p = 0; p < pairs.count; ++p) {
    if (demand(p) != 0.0) trip.emplace_back(0, p, demand(p));
  }
  for (int t = 0; t < m_tri; ++t) {
    trip.emplace_back(1 + t, pairs.index(tris[t].i, tris[t].j), 1.0);
    trip.emplace_back(1 + t, pairs.index(tris[t].i, tris[t].k), -1.0);
    trip.emplace_back(1 + t, pairs.index(tris[t].k, tris[t].j), -1.0);
  }
  for (int i = 0, p = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j, ++p) {
      Eigen::MatrixXd e = -(q.row(i).transpose() * q.row(j) + q.row(j).transpose() * q.row(i));
      Eigen::VectorXd col = svec(e);
      for (int r = 0; r < m_psd; ++r) {
        if (col(r) != 0.0) trip.emplace_back(1 + m_tri + r, p, col(r));
      }
    }
  }
  Eigen::SparseMatrix<double> a(m, pairs.count);
  a.setFromTriplets(trip.begin(), trip.end());
  const Eigen::SparseMatrix<double> at = a.transpose();
  const Eigen::VectorXd cost = pairs.flatten(inst.capacity());

  double rho = opt.rho;
  Eigen::VectorXd rho_vec(m);
  Eigen::LLT<Eigen::MatrixXd> llt;
  auto factor = [&] {
    rho_vec.setConstant(rho);
    rho_vec(0) = 1e3 * rho;
    Eigen::MatrixXd kkt = Eigen::MatrixXd(at * rho_vec.asDiagonal() * a);
    kkt.diagonal().array() += opt.sigma;
    llt.compute(kkt);
  };
  factor();

  auto project = [&](Eigen::VectorXd& v) {
    v(0) = 1.0;
    for (int t = 0; t < m_tri; ++t) v(1 + t) = std::min(0.0, v(1 + t));
    v.tail(m_psd) = svec(project_psd(smat(v.tail(m_psd), k)));
  };

  // The projected PSD block gives an exactly negative-type d; it is rescaled
  // to the normalization.
  auto gram_of = [&](const Eigen::VectorXd& v) -> Eigen::MatrixXd {
    return 0.5 * q * smat(v.tail(m_psd), k) * q.transpose();
  };
  auto metric_of = [&](const Eigen::VectorXd& v) {
    const Eigen::MatrixXd g = gram_of(v);
    Eigen::MatrixXd d(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) d(i, j) = i == j ? 0.0 : g(i, i) + g(j, j) - 2.0 * g(i, j);
    }
    return d;
  };
  auto norm_of = [&](const Eigen::VectorXd& v) {
    const double norm = demand_sum(inst, metric_of(v));
    if (!(norm > 0.0)) throw Error(ErrorCode::nonconverged, "phi_neg: degenerate solution");
    return norm;
  };
  auto settled = [&](const Eigen::VectorXd& v) {
    const Eigen::MatrixXd d = metric_of(v);
    const double norm = demand_sum(inst, d);
    return norm > 0.0 && max_triangle_violation(d / norm) <= opt.primal_tol;
  };

  Eigen::VectorXd x = Eigen::VectorXd::Zero(pairs.count);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(m);
  project(z);
  double r_prim = std::numeric_limits<double>::infinity(), r_dual = r_prim;
  long it = 0;
  for (; it < opt.max_iterations; ++it) {
    Eigen::VectorXd rhs = opt.sigma * x - cost + at * (rho_vec.cwiseProduct(z) - y);
    Eigen::VectorXd xt = llt.solve(rhs);
    Eigen::VectorXd zt = a * xt;
    x = opt.relaxation * xt + (1.0 - opt.relaxation) * x;
    Eigen::VectorXd zr = opt.relaxation * zt + (1.0 - opt.relaxation) * z;
    Eigen::VectorXd znew = zr + y.cwiseQuotient(rho_vec);
    project(znew);
    y += rho_vec.cwiseProduct(zr - znew);
    z = std::move(znew);

    if ((it + 1) % 10 != 0) continue;
    Eigen::VectorXd ax = a * x;
    Eigen::VectorXd aty = at * y;
    r_prim = (ax - z).lpNorm<Eigen::Infinity>();
    r_dual = (cost + aty).lpNorm<Eigen::Infinity>();
    if (r_prim <= opt.primal_tol && r_dual <= opt.dual_tol && settled(z)) {
      ++it;
      break;
    }
    if (opt.adapt_every > 0 && (it + 1) % opt.adapt_every == 0) {
      const double pn = r_prim / std::max({ax.lpNorm<Eigen::Infinity>(), z.lpNorm<Eigen::Infinity>(), 1e-12});
      const double dn = r_dual / std::max({aty.lpNorm<Eigen::Infinity>(), cost.lpNorm<Eigen::Infinity>(), 1e-12});
      double next = std::clamp(rho * std::sqrt(pn / std::max(dn, 1e-300)), 1e-6, 1e6);
      if (next > 5.0 * rho || next < rho / 5.0) {
        rho = next;
        factor();
      }
    }
  }
  if (!(r_prim <= opt.primal_tol && r_dual <= opt.dual_tol && settled(z))) {
    std::ostringstream msg;
    msg << "phi_neg: " << opt.max_iterations << " iterations, primal residual " << r_prim << ", dual residual "
        << r_dual;
    throw Error(ErrorCode::nonconverged, msg.str());
  }

  const Eigen::MatrixXd gram = gram_of(z) / norm_of(z);
  const Eigen::MatrixXd d = metric_of(z) / norm_of(z);
  const double norm = norm_of(z);
  RelaxationResult out;
  out.relaxation = "neg";
  out.value = capacity_sum(inst, d);
  out.metric = d;
  out.gram = gram;
  out.iterations = it;
  out.residuals["primal"] = r_prim;
  out.residuals["dual"] = r_dual;
  out.residuals["normalization"] = std::abs(norm - 1.0);
  out.residuals["triangle"] = std::max(0.0, max_triangle_violation(d));
  out.residuals["rho"] = rho;
  return out;
}

RelaxationResult phi_neg_cutting_plane(const SparsestCutInstance& inst, double tol, int max_rounds) {
  check_size(inst.n(), 12, "phi_neg_cutting_plane");
  // Vertices without capacity or demand leave their distances unbounded in
  // the LP. Solve without them and place each on top of an active vertex.
  const int n = inst.n();
  std::vector<int> active;
  std::vector<int> slot(n, -1);
  for (int i = 0; i < n; ++i) {
    bool used = false;
    for (int j = 0; j < n; ++j) used = used || inst.capacity()(i, j) > 0 || inst.demand()(i, j) > 0;
    if (used) {
      slot[i] = static_cast<int>(active.size());
      active.push_back(i);
    }
  }
  if (static_cast<int>(active.size()) < n) {
    std::vector<Edge> edges;
    std::vector<Demand> demands;
    for (const auto& e : inst.edges()) edges.push_back({slot[e.u], slot[e.v], e.cap});
    for (const auto& q : inst.demands())
      if (q.w > 0) demands.push_back({slot[q.u], slot[q.v], q.w});
    auto out = phi_neg_cutting_plane(SparsestCutInstance(static_cast<int>(active.size()), edges, demands), tol, max_rounds);
    const Eigen::MatrixXd& sub = *out.metric;
    Eigen::MatrixXd d(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const int a = slot[i] < 0 ? 0 : slot[i];
        const int b = slot[j] < 0 ? 0 : slot[j];
        d(i, j) = i == j ? 0.0 : sub(a, b);
      }
    out.metric = d;
    return out;
  }
  MetricLp lp(inst);
  lp.triangles = all_triangles(inst.n());
  RelaxationResult out;
  out.relaxation = "neg";
  Eigen::MatrixXd d;
  for (int round = 0;; ++round) {
    auto res = lp.solve(d);
    record_lp(out, res);
    out.value = res.objective;
    auto check = cuts::negative_type_check(d);
    out.residuals["max_eigenvalue"] = check.max_eigenvalue;
    if (check.max_eigenvalue <= tol * std::max(d.norm(), 1e-300)) break;
    if (round >= max_rounds) throw Error(ErrorCode::nonconverged, "negative-type cutting planes did not settle");
    // One cut per positive eigenvector: Σ_{i<j} c_i c_j d_ij <= 0, scaled to
    // unit max coefficient with dust removed.
    const Eigen::MatrixXd basis = zero_sum_basis(inst.n());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(basis.transpose() * d * basis);
    for (Eigen::Index e = 0; e < eig.eigenvalues().size(); ++e) {
      if (eig.eigenvalues()(e) <= tol * d.norm()) continue;
      Eigen::VectorXd c = basis * eig.eigenvectors().col(e);
      Eigen::VectorXd row = lp.pairs.flatten(c * c.transpose());
      const double big = row.cwiseAbs().maxCoeff();
      row /= big;
      for (auto& v : row) v = std::abs(v) <= 1e-12 ? 0.0 : v;
      lp.extra.push_back(row);
    }
  }
  out.metric = d;
  out.residuals["cuts"] = static_cast<double>(lp.extra.size());
  return out;
}

}  // namespace heislab::sparsest
