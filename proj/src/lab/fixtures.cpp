#include "heislab/lab/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "heislab/core/distance.hpp"
#include "heislab/core/word_metric.hpp"
#include "heislab/cuts/compression.hpp"
#include "heislab/cuts/l1.hpp"
#include "heislab/error.hpp"
#include "heislab/geometry/column_oracle.hpp"
#include "heislab/geometry/line_sampling.hpp"
#include "heislab/lab/report.hpp"
#include "heislab/parallel.hpp"
#include "heislab/sparsest/duality.hpp"
#include "heislab/sparsest/relaxations.hpp"

namespace heislab::lab {

using nlohmann::json;
using cuts::FiniteMetric;

namespace {

constexpr std::int64_t perimeter_lines = 1000000;
constexpr std::int64_t perimeter_verify_lines = 20000;
constexpr std::uint64_t perimeter_seed = 0x5eed0001;
constexpr double tau_radius = 0.9;
constexpr int tau_resolution = 800;
constexpr int word_band_radius = 8;
constexpr int heisenberg_grid = 3, heisenberg_points = 8;
constexpr std::uint64_t heisenberg_seed = 1;

bool close(double a, double b, double rel, double abs = 0.0) {
  return std::abs(a - b) <= std::max(abs, rel * std::max(std::abs(a), std::abs(b)));
}

// Recompute and compare every numeric leaf of the stored value.
bool leaves_close(const json& a, const json& b, double rel, double abs) {
  if (a.is_number() && b.is_number()) return close(a.get<double>(), b.get<double>(), rel, abs);
  if (a.is_array() && b.is_array()) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!leaves_close(a[i], b[i], rel, abs)) return false;
    }
    return true;
  }
  if (a.is_object() && b.is_object()) {
    if (a.size() != b.size()) return false;
    for (const auto& [k, v] : a.items()) {
      if (!b.contains(k) || !leaves_close(v, b[k], rel, abs)) return false;
    }
    return true;
  }
  return a == b;
}

FixtureSpec recomputed(std::string name, std::string oracle, std::function<json(int)> compute, double rel,
                       double abs = 0.0) {
  FixtureSpec s{std::move(name), std::move(oracle), compute, {}};
  char buf[96];
  std::snprintf(buf, sizeof buf, "recomputed, every value within rel %g / abs %g", rel, abs);
  const std::string relation = buf;
  s.verify = [compute, rel, abs, relation](const json& stored, int workers, bool& ok, std::string& rel_out) {
    json observed = compute(workers);
    ok = leaves_close(stored, observed, rel, abs);
    rel_out = relation;
    return observed;
  };
  return s;
}

json constants_json(const core::ComparisonConstants& c) {
  return {{"lo", c.lo}, {"hi", c.hi}, {"s_lo", c.s_lo}, {"s_hi", c.s_hi}};
}

json metric_json(const FiniteMetric& d) {
  json rows = json::array();
  for (int i = 0; i < d.size(); ++i) {
    json row = json::array();
    for (int j = 0; j < d.size(); ++j) row.push_back(d(i, j));
    rows.push_back(row);
  }
  return rows;
}

sparsest::SparsestCutInstance five_cycle() {
  std::vector<sparsest::Edge> edges;
  std::vector<sparsest::Demand> demands;
  for (int i = 0; i < 5; ++i) {
    edges.push_back({i, (i + 1) % 5, 1.0});
    demands.push_back({i, (i + 2) % 5, 1.0});
  }
  return {5, edges, demands};
}

json corpus_json() {
  json out = json::array();
  for (const auto& [name, d2] : duality_corpus()) {
    auto dual = sparsest::duality_instance(d2);
    out.push_back({{"name", name},
                   {"d2", metric_json(d2)},
                   {"c1", dual.c1},
                   {"reported_gap", dual.reported_gap},
                   {"trivial", dual.trivial}});
  }
  return out;
}

std::vector<FixtureSpec> build_registry() {
  std::vector<FixtureSpec> r;
  r.push_back(recomputed(
      "box_ball_constants", "core::box_ball_constants(grid=4096): extremes of cc_norm / box gauge",
      [](int) { return constants_json(core::box_ball_constants(4096)); }, 0.01));
  r.push_back(recomputed(
      "rho_cc_constants", "core::rho_cc_constants(grid=4096): extremes of rho(e, model(p)) / cc_norm(p)",
      [](int) { return constants_json(core::rho_cc_constants(4096)); }, 0.01));
  r.push_back(recomputed(
      "word_cc_band", "word ball of radius 8: extremes of cc_norm(g) / d_T(g), g != e",
      [](int) {
        auto [lo, hi] = word_cc_band(word_band_radius);
        return json{{"radius", word_band_radius}, {"lo", lo}, {"hi", hi}};
      },
      1e-9));

  FixtureSpec perimeter;
  perimeter.name = "halfspace_perimeter";
  perimeter.oracle =
      "crossing count of {a <= 0} on 1e6 lines of B_1(e), global normalization, seed 0x5eed0001; "
      "verify reruns 2e4 lines on seed 0x5eed0002";
  perimeter.compute = [](int workers) {
    auto p = halfspace_perimeter_reference(perimeter_lines, perimeter_seed, workers);
    return json{{"value", p.value}, {"stderr", p.std_error}, {"lines", p.lines}, {"seed", p.seed}};
  };
  perimeter.verify = [](const json& stored, int workers, bool& ok, std::string& relation) {
    auto p = halfspace_perimeter_reference(perimeter_verify_lines, perimeter_seed + 1, workers);
    const double se = std::hypot(stored.at("stderr").get<double>(), p.std_error);
    ok = std::abs(p.value - stored.at("value").get<double>()) <= 3.0 * se;
    relation = "|obs - stored| <= 3 sigma (combined)";
    return json{{"value", p.value}, {"stderr", p.std_error}, {"lines", p.lines}, {"seed", p.seed}};
  };
  r.push_back(perimeter);

  r.push_back(recomputed(
      "bilinear_tau0",
      "column oracle, n=800: least symmetric difference of {z <= xy, y > 0} against half-spaces in "
      "B_0.9((0,1,0)), pattern search from three starts",
      [](int) {
        return json{{"radius", tau_radius}, {"resolution", tau_resolution},
                    {"value", bilinear_tau(tau_radius, tau_resolution)}};
      },
      1e-9));
  r.push_back(recomputed(
      "c1_k23", "l1_distortion of the K_{2,3} path metric: primal c1 and dual bound",
      [](int) {
        auto d = cuts::l1_distortion(k23_metric());
        return json{{"c1", d.c1}, {"dual_bound", d.dual_bound}};
      },
      0.0, 1e-7));
  r.push_back(recomputed(
      "phi_met_c5", "phi_met and phi_met_dual on the unit 5-cycle with unit demands (i, i+2)",
      [](int) {
        auto inst = five_cycle();
        return json{{"primal", sparsest::phi_met(inst).value}, {"dual", sparsest::phi_met_dual(inst).value}};
      },
      0.0, 1e-7));
  r.push_back(recomputed(
      "duality_corpus", "duality_instance on each corpus metric: c1 and reported gap",
      [](int) { return corpus_json(); }, 0.0, 1e-6));
  r.push_back(recomputed(
      "heisenberg_gap8", "duality_instance of heisenberg_instance(n=3, k=8, seed=1)",
      [](int) {
        auto h = sparsest::heisenberg_instance(heisenberg_grid, heisenberg_points, heisenberg_seed);
        auto dual = sparsest::duality_instance(h.d2);
        return json{{"grid", heisenberg_grid}, {"points", heisenberg_points}, {"seed", heisenberg_seed},
                    {"c1", dual.c1},         {"reported_gap", dual.reported_gap}};
      },
      0.0, 1e-6));
  r.push_back(recomputed(
      "compression_lipschitz", "compression_rate of f(a,b,c) = (a,b,c) on word balls of radius 4, 6, 8",
      [](int) {
        json radii = json::array(), lip = json::array();
        for (int radius : {4, 6, 8}) {
          core::WordBall ball(radius);
          cuts::GridMap f;
          for (const auto& g : ball.elements()) {
            f[g] = {static_cast<double>(g.a), static_cast<double>(g.b), static_cast<double>(g.c)};
          }
          radii.push_back(radius);
          lip.push_back(cuts::compression_rate(ball.elements(), f, radius).lipschitz);
        }
        return json{{"radii", radii}, {"lipschitz", lip}};
      },
      1e-12));
  return r;
}

}  // namespace

const std::vector<FixtureSpec>& fixture_registry() {
  static const std::vector<FixtureSpec> registry = build_registry();
  return registry;
}

const FixtureSpec& fixture_spec(const std::string& name) {
  for (const auto& s : fixture_registry()) {
    if (s.name == name) return s;
  }
  throw Error(ErrorCode::invalid_argument, "unknown fixture '" + name + "'");
}

FixtureFile FixtureFile::read(const std::filesystem::path& path) {
  FixtureFile f;
  std::ifstream in(path);
  if (!in) return f;
  try {
    f.doc_ = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::schema_violation, std::string("fixture file is not valid JSON: ") + e.what());
  }
  if (!f.doc_.is_object() || f.doc_.value("schema", 0) != fixtures_schema || !f.doc_.contains("version") ||
      !f.doc_["version"].is_number_integer() || !f.doc_.contains("fixtures") || !f.doc_["fixtures"].is_object()) {
    throw Error(ErrorCode::schema_violation, "fixture file needs schema 1, an integer version and a fixtures object");
  }
  f.version_ = f.doc_["version"].get<int>();
  return f;
}

bool FixtureFile::has(const std::string& name) const { return doc_["fixtures"].contains(name); }

const nlohmann::json& FixtureFile::value(const std::string& name) const {
  if (!has(name)) throw Error(ErrorCode::schema_violation, "fixture '" + name + "' is not recorded");
  const nlohmann::json& entry = doc_["fixtures"][name];
  if (!entry.is_object() || !entry.contains("value")) {
    throw Error(ErrorCode::schema_violation, "fixture '" + name + "' has no value");
  }
  return entry["value"];
}

void FixtureFile::set(const std::string& name, nlohmann::json value, const std::string& oracle) {
  nlohmann::json& slot = doc_["fixtures"][name];
  if (!slot.is_object() || slot.value("value", nlohmann::json()) != value || slot.value("oracle", "") != oracle) changed_ = true;
  slot = {{"value", std::move(value)},
          {"oracle", oracle},
          {"regenerate", "heislab fixtures regenerate --oracle --only " + name}};
}

void FixtureFile::write(const std::filesystem::path& path) {
  if (changed_) {
    doc_["version"] = ++version_;
    changed_ = false;
  }
  write_atomic(path, doc_.dump(2) + "\n");
}

std::vector<FixtureCheck> verify_fixtures(const FixtureFile& file, const std::vector<std::string>& only,
                                          int workers) {
  std::vector<FixtureCheck> out;
  for (const auto& spec : fixture_registry()) {
    if (!only.empty() && std::find(only.begin(), only.end(), spec.name) == only.end()) continue;
    FixtureCheck c;
    c.name = spec.name;
    if (!file.has(spec.name)) {
      c.relation = "not recorded";
      out.push_back(c);
      continue;
    }
    c.stored = file.value(spec.name);
    c.observed = spec.verify(c.stored, workers, c.ok, c.relation);
    out.push_back(std::move(c));
  }
  for (const auto& name : only) fixture_spec(name);
  return out;
}

void regenerate_fixtures(FixtureFile& file, const std::vector<std::string>& only, int workers) {
  for (const auto& name : only) fixture_spec(name);
  for (const auto& spec : fixture_registry()) {
    if (!only.empty() && std::find(only.begin(), only.end(), spec.name) == only.end()) continue;
    file.set(spec.name, spec.compute(workers), spec.oracle);
  }
}

cuts::FiniteMetric k23_metric() {
  return FiniteMetric::graph_metric(5, {{0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 4}});
}

std::vector<std::pair<std::string, FiniteMetric>> duality_corpus() {
  std::vector<std::pair<std::string, FiniteMetric>> out;
  out.emplace_back("K23", k23_metric());
  out.emplace_back("K24", FiniteMetric::graph_metric(6, {{0, 2}, {0, 3}, {0, 4}, {0, 5}, {1, 2}, {1, 3}, {1, 4}, {1, 5}}));
  out.emplace_back("K33", FiniteMetric::graph_metric(
                              6, {{0, 3}, {0, 4}, {0, 5}, {1, 3}, {1, 4}, {1, 5}, {2, 3}, {2, 4}, {2, 5}}));
  out.emplace_back("C5", FiniteMetric::graph_metric(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}}));
  out.emplace_back("K222", FiniteMetric::graph_metric(
                               6, {{0, 2}, {0, 3}, {0, 4}, {0, 5}, {1, 2}, {1, 3}, {1, 4}, {1, 5}, {2, 4}, {2, 5}, {3, 4}, {3, 5}}));
  out.emplace_back("petersen",
                   FiniteMetric::graph_metric(10, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}, {0, 5}, {1, 6}, {2, 7}, {3, 8},
                                                   {4, 9}, {5, 7}, {7, 9}, {9, 6}, {6, 8}, {8, 5}}));
  out.emplace_back("heisenberg_n3_k8_s1",
                   sparsest::heisenberg_instance(heisenberg_grid, heisenberg_points, heisenberg_seed).d2);
  out.emplace_back("heisenberg_n2_k10_s2", sparsest::heisenberg_instance(2, 10, 2).d2);
  return out;
}

PerimeterReference halfspace_perimeter_reference(std::int64_t lines, std::uint64_t seed, int workers) {
  auto sample = geometry::sample_lines(core::identity, 1.0, lines, seed, geometry::LineNormalization::global, workers);
  std::vector<char> hit(sample.size(), 0);
  parallel_for(sample.size(), workers, [&](std::size_t i) {
    const auto& line = sample[i].line;
    if (line.u() == 0.0) return;
    hit[i] = core::in_cc_ball(core::identity, 1.0, line.at(-line.base.a / line.u()));
  });
  std::int64_t count = 0;
  for (char h : hit) count += h;
  PerimeterReference p;
  p.lines = lines;
  p.seed = seed;
  const double f = static_cast<double>(count) / static_cast<double>(lines);
  p.value = f * geometry::line_measure_mass(1.0, geometry::LineNormalization::global);
  p.std_error = std::sqrt(f * (1.0 - f) / static_cast<double>(lines));
  return p;
}

std::pair<double, double> word_cc_band(int radius) {
  core::WordBall ball(radius);
  double lo = INFINITY, hi = 0.0;
  for (std::size_t i = 0; i < ball.size(); ++i) {
    const int d = ball.distances()[i];
    if (d == 0) continue;
    const double ratio = core::cc_norm(ball.elements()[i].to_point()) / d;
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  return {lo, hi};
}

double bilinear_tau(double r, int resolution) {
  geometry::ColumnOracle oracle(resolution);
  auto graph = geometry::bilinear_local_graph(r);
  double best = INFINITY;
  for (double tilt : {0.0, 0.2, -0.2}) {
    best = std::min(best, oracle.minimize(graph, {-2.0 / r, tilt, 1.0}, 0.0).symdiff);
  }
  return best;
}

}  // namespace heislab::lab
