#include "heislab/cuts/metric.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <fstream>
#include <sstream>

#include "heislab/core/constants.hpp"
#include "heislab/error.hpp"

namespace heislab::cuts {

FiniteMetric::FiniteMetric(Eigen::MatrixXd d) : d_(std::move(d)) {
  const auto n = d_.rows();
  auto bad = [](const std::string& msg) { throw Error(ErrorCode::invalid_argument, "finite metric: " + msg); };
  if (d_.cols() != n) bad("matrix is not square");
  if (n == 0) bad("no points");
  if (!d_.allFinite()) bad("non-finite entry");
  const double scale = std::max(1e-300, d_.cwiseAbs().maxCoeff());
  const double tol = core::Tolerances::metric_triangle * scale;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (d_(i, i) != 0.0) bad("nonzero diagonal");
    for (Eigen::Index j = 0; j < n; ++j) {
      if (d_(i, j) < 0.0) bad("negative entry");
      if (std::abs(d_(i, j) - d_(j, i)) > 1e-12 * scale) bad("matrix is not symmetric");
    }
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        if (d_(i, j) > d_(i, k) + d_(k, j) + tol) {
          bad("triangle inequality fails at (" + std::to_string(i) + "," + std::to_string(j) + ") via " +
              std::to_string(k));
        }
      }
    }
  }
  // Exact symmetry from here on.
  d_ = 0.5 * (d_ + d_.transpose()).eval();
}

FiniteMetric FiniteMetric::restrict_to(const std::vector<int>& points) const {
  const auto k = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd s(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) s(i, j) = d_(points.at(i), points.at(j));
  }
  return FiniteMetric(std::move(s));
}

FiniteMetric FiniteMetric::scaled(double alpha) const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorCode::invalid_argument, "metric scale must be positive");
  }
  return FiniteMetric(alpha * d_);
}

FiniteMetric FiniteMetric::graph_metric(int n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (auto [a, b] : edges) {
    if (a < 0 || b < 0 || a >= n || b >= n) throw Error(ErrorCode::invalid_argument, "edge out of range");
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  Eigen::MatrixXd d = Eigen::MatrixXd::Constant(n, n, -1.0);
  for (int s = 0; s < n; ++s) {
    std::deque<int> queue{s};
    d(s, s) = 0.0;
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      for (int v : adj[u]) {
        if (d(s, v) < 0.0) d(s, v) = d(s, u) + 1.0, queue.push_back(v);
      }
    }
  }
  if ((d.array() < 0.0).any()) throw Error(ErrorCode::invalid_argument, "graph is not connected");
  return FiniteMetric(std::move(d));
}

FiniteMetric FiniteMetric::read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path.string());
  auto bad = [&](const std::string& msg) {
    throw Error(ErrorCode::schema_violation, path.string() + ": " + msg);
  };
  std::string line;
  if (!std::getline(in, line)) bad("missing header");
  int n = 0;
  try {
    std::size_t used = 0;
    n = std::stoi(line, &used);
    if (line.find_first_not_of(" \t\r", used) != std::string::npos) bad("header must be the point count");
  } catch (const std::logic_error&) {
    bad("header must be the point count");
  }
  if (n <= 0) bad("point count must be positive");
  Eigen::MatrixXd d(n, n);
  for (int i = 0; i < n; ++i) {
    if (!std::getline(in, line)) bad("expected " + std::to_string(n) + " rows");
    std::stringstream ss(line);
    std::string cell;
    int j = 0;
    while (std::getline(ss, cell, ',')) {
      if (j >= n) bad("row " + std::to_string(i) + " has too many entries");
      try {
        std::size_t used = 0;
        d(i, j) = std::stod(cell, &used);
        if (cell.find_first_not_of(" \t\r", used) != std::string::npos) bad("malformed number");
      } catch (const std::logic_error&) {
        bad("malformed number in row " + std::to_string(i));
      }
      ++j;
    }
    if (j != n) bad("row " + std::to_string(i) + " has " + std::to_string(j) + " entries");
  }
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") != std::string::npos) bad("trailing data");
  }
  try {
    return FiniteMetric(std::move(d));
  } catch (const Error& e) {
    bad(e.what());
  }
  throw Error(ErrorCode::schema_violation, "unreachable");
}

void FiniteMetric::write_csv(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io, "cannot write " + path.string());
  out.precision(17);
  out << size() << '\n';
  for (int i = 0; i < size(); ++i) {
    for (int j = 0; j < size(); ++j) out << (j ? "," : "") << d_(i, j);
    out << '\n';
  }
}

int pair_index(int n, int i, int j) {
  if (i > j) std::swap(i, j);
  return i * (2 * n - i - 1) / 2 + (j - i - 1);
}

void CutMeasure::check_n(int n) {
  if (n < 1 || n > 63) throw Error(ErrorCode::invalid_argument, "cut measures support 1..63 points");
}

std::uint64_t CutMeasure::canonical(std::uint64_t cut, int n) {
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  return (cut & 1u) ? (full & ~cut) : cut;
}

void CutMeasure::add(std::uint64_t cut, double weight) {
  const std::uint64_t full = (std::uint64_t{1} << n_) - 1;
  if (cut & ~full) throw Error(ErrorCode::invalid_argument, "cut has bits outside the point set");
  if (cut == 0 || cut == full) throw Error(ErrorCode::invalid_argument, "trivial cut");
  if (!(weight > 0.0) || !std::isfinite(weight)) {
    throw Error(ErrorCode::invalid_argument, "cut weights must be finite and positive");
  }
  std::uint64_t c = canonical(cut, n_);
  auto it = std::lower_bound(entries_.begin(), entries_.end(), c,
                             [](const Entry& e, std::uint64_t v) { return e.cut < v; });
  if (it != entries_.end() && it->cut == c) {
    it->weight += weight;
  } else {
    entries_.insert(it, Entry{c, weight});
  }
}

nlohmann::json CutMeasure::to_json() const {
  auto out = nlohmann::json::array();
  for (const auto& e : entries_) {
    std::ostringstream hex;
    hex << "0x" << std::hex << e.cut;
    out.push_back({{"cut", hex.str()}, {"w", e.weight}});
  }
  return out;
}

CutMeasure CutMeasure::from_json(const nlohmann::json& j, int n) {
  auto bad = [](const std::string& msg) { throw Error(ErrorCode::schema_violation, "cut measure: " + msg); };
  if (!j.is_array()) bad("expected a list");
  CutMeasure m(n);
  for (const auto& item : j) {
    if (!item.is_object() || item.size() != 2 || !item.contains("cut") || !item.contains("w")) {
      bad("entries must be {\"cut\": hex, \"w\": weight}");
    }
    if (!item["cut"].is_string() || !item["w"].is_number()) bad("bad entry types");
    std::string s = item["cut"].get<std::string>();
    if (s.rfind("0x", 0) != 0 || s.size() < 3) bad("cut must be a 0x-prefixed hex string");
    std::uint64_t cut = 0;
    try {
      std::size_t used = 0;
      cut = std::stoull(s.substr(2), &used, 16);
      if (used != s.size() - 2) bad("malformed hex cut " + s);
    } catch (const std::logic_error&) {
      bad("malformed hex cut " + s);
    }
    try {
      m.add(cut, item["w"].get<double>());
    } catch (const Error& e) {
      bad(e.what());
    }
  }
  return m;
}

FiniteMetric cut_metric(const CutMeasure& m) {
  const int n = m.size();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : m.entries()) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (((e.cut >> i) & 1u) != ((e.cut >> j) & 1u)) d(i, j) += e.weight;
      }
    }
  }
  return FiniteMetric(std::move(d));
}

std::vector<std::uint64_t> all_cuts(int n) {
  if (n < 2) return {};
  std::vector<std::uint64_t> cuts;
  const std::uint64_t count = (std::uint64_t{1} << (n - 1)) - 1;
  cuts.reserve(count);
  for (std::uint64_t k = 1; k <= count; ++k) cuts.push_back(k << 1);
  return cuts;
}

}  // namespace heislab::cuts
