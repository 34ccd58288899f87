#include "heislab/cuts/l1.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <cmath>

#include "heislab/error.hpp"

namespace heislab::cuts {

namespace {

void check_cut_limit(int n) {
  if (n > max_cut_points) {
    throw Error(ErrorCode::explicit_limit, "cut LPs enumerate 2^(n-1) cuts; n = " + std::to_string(n) +
                                               " exceeds " + std::to_string(max_cut_points));
  }
}

bool separates(std::uint64_t cut, int i, int j) { return ((cut >> i) & 1u) != ((cut >> j) & 1u); }

}  // namespace

NegativeTypeResult negative_type_check(const Eigen::MatrixXd& d) {
  const auto n = d.rows();
  if (d.cols() != n || n == 0) throw Error(ErrorCode::invalid_argument, "negative type: matrix must be square");
  if (!d.allFinite()) throw Error(ErrorCode::invalid_argument, "negative type: non-finite entry");
  const double fro = d.norm();
  if ((d - d.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(fro, 1e-300) ||
      d.diagonal().cwiseAbs().maxCoeff() != 0.0) {
    throw Error(ErrorCode::invalid_argument, "negative type: matrix must be symmetric with zero diagonal");
  }
  NegativeTypeResult out;
  out.threshold = 1e-8 * fro;
  if (n == 1) {
    out.max_eigenvalue = 0.0;
    return out;
  }
  // Columns 2..n of the Householder Q of the ones vector span the zero-sum subspace.
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(Eigen::MatrixXd::Ones(n, 1));
  Eigen::MatrixXd q = qr.householderQ();
  Eigen::MatrixXd basis = q.rightCols(n - 1);
  Eigen::MatrixXd sym = 0.5 * (d + d.transpose());
  Eigen::MatrixXd m = basis.transpose() * sym * basis;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
  out.max_eigenvalue = eig.eigenvalues()(n - 2);
  out.negative_type = out.max_eigenvalue <= out.threshold;
  if (!out.negative_type) {
    Eigen::VectorXd c = basis * eig.eigenvectors().col(n - 2);
    c.array() -= c.mean();
    out.certificate = c;
  }
  return out;
}

Eigen::MatrixXd cut_matrix(int n, const std::vector<std::uint64_t>& cuts) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(pair_count(n), static_cast<Eigen::Index>(cuts.size()));
  for (std::size_t k = 0; k < cuts.size(); ++k) {
    int p = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j, ++p) {
        if (separates(cuts[k], i, j)) m(p, static_cast<Eigen::Index>(k)) = 1.0;
      }
    }
  }
  return m;
}

ConeMembership l1_cone_membership(const FiniteMetric& d) {
  const int n = d.size();
  check_cut_limit(n);
  ConeMembership out;
  const double scale = d.max_entry();
  if (n < 2 || scale == 0.0) {
    out.feasible = true;
    out.witness = CutMeasure(n);
    out.lp.status = LpStatus::optimal;
    return out;
  }
  const auto cuts = all_cuts(n);
  LinearProgram lp;
  for (std::size_t k = 0; k < cuts.size(); ++k) lp.add_column(0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      int row = lp.add_row(RowSense::eq, d(i, j) / scale);
      for (std::size_t k = 0; k < cuts.size(); ++k) {
        if (separates(cuts[k], i, j)) lp.set(row, static_cast<int>(k), 1.0);
      }
    }
  }
  out.lp = solve(lp);
  if (out.lp.status == LpStatus::optimal) {
    out.feasible = true;
    CutMeasure w(n);
    for (std::size_t k = 0; k < cuts.size(); ++k) {
      if (out.lp.x[k] > 1e-12) w.add(cuts[k], out.lp.x[k] * scale);
    }
    out.witness = std::move(w);
  } else if (out.lp.status == LpStatus::infeasible) {
    out.certificate = out.lp.farkas;
  } else {
    throw Error(ErrorCode::nonconverged, std::string("cone membership LP: ") + to_string(out.lp.status));
  }
  return out;
}

Distortion l1_distortion(const FiniteMetric& d) {
  const int n = d.size();
  check_cut_limit(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (d(i, j) <= 0.0) {
        throw Error(ErrorCode::invalid_argument, "distortion needs distinct points at positive distance");
      }
    }
  }
  Distortion out;
  out.witness = CutMeasure(std::max(n, 2));
  if (n < 2) {
    out.witness = CutMeasure(1);
    out.lp.status = LpStatus::optimal;
    out.lp.objective = out.lp.dual_objective = 1.0;
    return out;
  }
  const double scale = d.max_entry();
  const auto cuts = all_cuts(n);
  LinearProgram lp;
  for (std::size_t k = 0; k < cuts.size(); ++k) lp.add_column(0.0);
  const int dcol = lp.add_column(1.0);
  const int pairs = pair_count(n);
  std::vector<int> ge_rows(pairs), le_rows(pairs);
  int p = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j, ++p) {
      const double dij = d(i, j) / scale;
      ge_rows[p] = lp.add_row(RowSense::ge, dij);
      le_rows[p] = lp.add_row(RowSense::le, 0.0);
      for (std::size_t k = 0; k < cuts.size(); ++k) {
        if (separates(cuts[k], i, j)) {
          lp.set(ge_rows[p], static_cast<int>(k), 1.0);
          lp.set(le_rows[p], static_cast<int>(k), 1.0);
        }
      }
      lp.set(le_rows[p], dcol, -dij);
    }
  }
  out.lp = solve(lp);
  if (out.lp.status != LpStatus::optimal) {
    throw Error(ErrorCode::nonconverged, std::string("distortion LP: ") + to_string(out.lp.status));
  }
  out.c1 = out.lp.x[dcol];
  out.dual_bound = out.lp.dual_objective;
  CutMeasure w(n);
  for (std::size_t k = 0; k < cuts.size(); ++k) {
    if (out.lp.x[k] > 1e-12) w.add(cuts[k], out.lp.x[k] * scale);
  }
  out.witness = std::move(w);
  out.alpha.resize(pairs);
  out.beta.resize(pairs);
  for (int q = 0; q < pairs; ++q) {
    out.alpha[q] = std::max(0.0, out.lp.duals[ge_rows[q]]);
    out.beta[q] = std::max(0.0, -out.lp.duals[le_rows[q]]);
  }
  return out;
}

}  // namespace heislab::cuts
