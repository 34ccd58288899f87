#include "heislab/sparsest/instance.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "heislab/error.hpp"
#include "heislab/random.hpp"

namespace heislab::sparsest {

SparsestCutInstance::SparsestCutInstance(int n, std::vector<Edge> edges, std::vector<Demand> demands)
    : n_(n), edges_(std::move(edges)), demands_(std::move(demands)) {
  auto bad = [](const std::string& msg) { throw Error(ErrorCode::invalid_argument, "instance: " + msg); };
  if (n < 2) bad("need at least two vertices");
  cap_ = Eigen::MatrixXd::Zero(n, n);
  dem_ = Eigen::MatrixXd::Zero(n, n);
  auto check_pair = [&](int u, int v) {
    if (u < 0 || v < 0 || u >= n || v >= n) bad("vertex out of range");
    if (u == v) bad("self loop");
  };
  for (const auto& e : edges_) {
    check_pair(e.u, e.v);
    if (!(e.cap > 0.0) || !std::isfinite(e.cap)) bad("capacities must be positive and finite");
    cap_(e.u, e.v) += e.cap;
    cap_(e.v, e.u) += e.cap;
  }
  bool positive = false;
  for (const auto& d : demands_) {
    check_pair(d.u, d.v);
    if (!(d.w >= 0.0) || !std::isfinite(d.w)) bad("demands must be nonnegative and finite");
    positive = positive || d.w > 0.0;
    dem_(d.u, d.v) += d.w;
    dem_(d.v, d.u) += d.w;
  }
  if (!positive) bad("no positive demand");
}

nlohmann::json SparsestCutInstance::to_json() const {
  nlohmann::json j{{"n", n_}, {"edges", nlohmann::json::array()}, {"demands", nlohmann::json::array()}};
  for (const auto& e : edges_) j["edges"].push_back({{"u", e.u}, {"v", e.v}, {"cap", e.cap}});
  for (const auto& d : demands_) j["demands"].push_back({{"u", d.u}, {"v", d.v}, {"w", d.w}});
  return j;
}

SparsestCutInstance SparsestCutInstance::from_json(const nlohmann::json& j) {
  auto bad = [](const std::string& msg) { throw Error(ErrorCode::schema_violation, "instance: " + msg); };
  if (!j.is_object()) bad("expected an object");
  for (const auto& [key, _] : j.items()) {
    if (key != "n" && key != "edges" && key != "demands") bad("unknown key " + key);
  }
  if (!j.contains("n") || !j["n"].is_number_integer()) bad("n must be an integer");
  if (!j.contains("edges") || !j["edges"].is_array()) bad("edges must be a list");
  if (!j.contains("demands") || !j["demands"].is_array()) bad("demands must be a list");
  auto read = [&](const nlohmann::json& item, const char* weight) {
    if (!item.is_object() || item.size() != 3 || !item.contains("u") || !item.contains("v") ||
        !item.contains(weight)) {
      bad(std::string("entries need exactly u, v, ") + weight);
    }
    if (!item["u"].is_number_integer() || !item["v"].is_number_integer() || !item[weight].is_number()) {
      bad("bad entry types");
    }
    return std::tuple{item["u"].get<int>(), item["v"].get<int>(), item[weight].get<double>()};
  };
  std::vector<Edge> edges;
  for (const auto& e : j["edges"]) {
    auto [u, v, w] = read(e, "cap");
    edges.push_back({u, v, w});
  }
  std::vector<Demand> demands;
  for (const auto& d : j["demands"]) {
    auto [u, v, w] = read(d, "w");
    demands.push_back({u, v, w});
  }
  try {
    return SparsestCutInstance(j["n"].get<int>(), std::move(edges), std::move(demands));
  } catch (const Error& e) {
    bad(e.what());
  }
  throw Error(ErrorCode::schema_violation, "unreachable");
}

SparsestCutInstance SparsestCutInstance::read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::schema_violation, path.string() + ": " + e.what());
  }
  return from_json(j);
}

namespace {

double pair_sum(const Eigen::MatrixXd& w, const Eigen::MatrixXd& d) {
  if (d.rows() != w.rows() || d.cols() != w.cols()) {
    throw Error(ErrorCode::invalid_argument, "metric size does not match the instance");
  }
  double s = 0.0;
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < w.cols(); ++j) s += w(i, j) * d(i, j);
  }
  return s;
}

}  // namespace

double capacity_sum(const SparsestCutInstance& inst, const Eigen::MatrixXd& d) {
  return pair_sum(inst.capacity(), d);
}

double demand_sum(const SparsestCutInstance& inst, const Eigen::MatrixXd& d) {
  return pair_sum(inst.demand(), d);
}

double phi_of(const SparsestCutInstance& inst, const Eigen::MatrixXd& d) {
  const double den = demand_sum(inst, d);
  if (den <= 0.0) return std::numeric_limits<double>::infinity();
  return capacity_sum(inst, d) / den;
}

SparsestCutInstance random_instance(int n, std::uint64_t seed, double p_edge, double p_demand) {
  CounterRng rng(seed, static_cast<std::uint64_t>(n));
  std::vector<Edge> edges;
  std::vector<Demand> demands;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (rng.uniform() < p_edge) edges.push_back({u, v, rng.uniform(0.1, 1.0)});
      if (rng.uniform() < p_demand) demands.push_back({u, v, rng.uniform(0.1, 1.0)});
    }
  }
  if (demands.empty()) demands.push_back({0, n - 1, 1.0});
  return SparsestCutInstance(n, std::move(edges), std::move(demands));
}

}  // namespace heislab::sparsest
