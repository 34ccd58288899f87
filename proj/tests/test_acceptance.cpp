// Acceptance suite: one PASS/FAIL line per criterion. Pass criterion numbers
// as arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "heislab/core/automorphism.hpp"
#include "heislab/core/distance.hpp"
#include "heislab/cuts/l1.hpp"
#include "heislab/error.hpp"
#include "heislab/geometry/monotonicity.hpp"
#include "heislab/lab/experiments.hpp"
#include "heislab/lab/fixtures.hpp"
#include "heislab/sparsest/duality.hpp"
#include "heislab/sparsest/instance.hpp"
#include "heislab/sparsest/relaxations.hpp"

using namespace heislab;
using core::Point;
using nlohmann::json;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> lines;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    lines.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const lab::FixtureFile& fixtures() {
  static const lab::FixtureFile f = lab::FixtureFile::read(HEISLAB_FIXTURES_FILE);
  return f;
}

lab::RunReport run(const json& manifest) {
  return lab::run_experiment(lab::ExperimentManifest::from_json(manifest), lab::RunOptions{HEISLAB_FIXTURES_FILE});
}

void report_comparisons(Outcome& o, const lab::RunReport& r) {
  for (const auto& c : r.comparisons) {
    if (c.verdict == lab::Verdict::info) continue;
    o.check(c.verdict == lab::Verdict::pass,
            c.name + ": expected " + c.expected.dump() + ", observed " + c.observed.dump() + " (" + c.relation + ")");
  }
  for (const auto& e : r.errors) o.check(false, "error: " + e);
  if (r.nonconverged) o.check(false, "nonconverged");
}

// ------------------------------------------------------------------------

Outcome group_metric_suite() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> u(-2.0, 2.0), scale(0.1, 10.0);
  const int samples = 10000;
  int assoc = 0, hom = 0, inv = 0, homothety = 0;
  double inv_worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    Point p{u(rng), u(rng), u(rng)}, q{u(rng), u(rng), u(rng)}, r{u(rng), u(rng), u(rng)};
    Point lhs = core::multiply(core::multiply(p, q), r), rhs = core::multiply(p, core::multiply(q, r));
    if (core::coord_linf(lhs, rhs) > 1e-8 * (1.0 + core::coord_linf(lhs, core::identity))) ++assoc;

    double k11 = u(rng), k12 = u(rng), k21 = u(rng), k22 = u(rng);
    if (std::abs(k11 * k22 - k12 * k21) < 1e-3) k11 += 3.0;
    core::LinearAuto k(k11, k12, k21, k22);
    Point a = k(core::multiply(p, q)), b = core::multiply(k(p), k(q));
    if (core::coord_linf(a, b) > 1e-8 * (1.0 + core::coord_linf(a, core::identity))) ++hom;

    const double d = core::cc_distance(p, q);
    const double di = core::cc_distance(core::inverse(p), core::inverse(q));
    inv_worst = std::max(inv_worst, std::abs(di - d));
    if (std::abs(di - d) > 1e-8 * std::max(1.0, d)) ++inv;

    const double s = scale(rng);
    auto dil = core::LinearAuto::dilation(s);
    if (std::abs(core::cc_distance(dil(p), dil(q)) - s * d) > 1e-8 * std::max(1.0, s * d)) ++homothety;
  }
  const double elapsed = seconds_since(t0);
  o.check(assoc == 0, fmt("associativity: %d of %d samples off by more than 1e-8", assoc, samples));
  o.check(hom == 0, fmt("automorphism homomorphism: %d of %d off", hom, samples));
  o.check(inv == 0, fmt("inversion isometry d(p^-1,q^-1) = d(p,q): %d of %d off, worst %.3g", inv, samples,
                        inv_worst));
  o.check(homothety == 0, fmt("homothety d(A_R p, A_R q) = R d(p,q): %d of %d off", homothety, samples));
  o.check(elapsed < 10.0, fmt("runtime %.2f s < 10 s", elapsed));
  return o;
}

Outcome distance_checks() {
  Outcome o;
  bool exact = true;
  for (double t : {-5.0, -1.0, -1e-3, 0.0, 0.3, 1.0, 2.5, 1e3}) exact = exact && core::cc_distance(core::identity, {t, 0, 0}) == std::abs(t);
  o.check(exact, "d(e,(t,0,0)) == |t| for 8 values of t");
  const double sqrt2pi = std::sqrt(2.0 * std::numbers::pi);
  const double vertical = core::cc_distance(core::identity, {0, 0, 1});
  o.check(std::abs(vertical - sqrt2pi) <= 1e-6, fmt("d(e,(0,0,1)) = %.12f vs sqrt(2 pi) = %.12f", vertical, sqrt2pi));
  // Arc solver in the nondegenerate regime, approaching the vertical axis.
  const double arc = core::cc_norm({1e-9, 0, 1});
  o.check(std::abs(arc - sqrt2pi) <= 1e-6, fmt("arc solver at (1e-9,0,1): %.12f", arc));

  auto a = core::box_ball_constants(), b = core::box_ball_constants();
  o.check(a.lo == b.lo && a.hi == b.hi, fmt("box-ball constants identical on rerun: [%.6f, %.6f]", a.lo, a.hi));
  auto coarse = core::box_ball_constants(2048);
  o.check(std::abs(coarse.lo / a.lo - 1) <= 0.01 && std::abs(coarse.hi / a.hi - 1) <= 0.01,
          fmt("grid 2048 vs 4096 within 1%%: [%.6f, %.6f]", coarse.lo, coarse.hi));
  if (fixtures().has("box_ball_constants")) {
    const auto& f = fixtures().value("box_ball_constants");
    const double lo = f["lo"].get<double>(), hi = f["hi"].get<double>();
    o.check(std::abs(a.lo / lo - 1) <= 0.01 && std::abs(a.hi / hi - 1) <= 0.01,
            fmt("fixture box_ball_constants within 1%%: [%.6f, %.6f]", lo, hi));
  } else {
    o.check(false, "fixture box_ball_constants recorded");
  }
  return o;
}

Outcome monotonicity_suite() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  using namespace geometry;
  auto half = nonmonotonicity_total(Region::halfspace(core::HalfSpace({1, 0, 0}, 0.0)), core::identity, 1.0, 10000, 301);
  o.check(half.within_sigmas(0.0, 3.0), fmt("NM(half-space) = %.3g +- %.3g at 1e4 lines", half.value, half.std_error));
  auto bil = nonmonotonicity_total(Region::bilinear(), {0, 1, 0}, 0.2, 10000, 302);
  o.check(bil.within_sigmas(0.0, 3.0), fmt("NM(bilinear, B_0.2((0,1,0))) = %.3g +- %.3g", bil.value, bil.std_error));

  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  // Endpoints on the grid 2^-20 Z, where every sum and difference the two
  // algorithms form is exact, so their results must agree bit for bit.
  auto random_trace = [&](int k) {
    std::vector<double> cuts(2 * k);
    for (auto& c : cuts) c = std::ldexp(std::floor(std::ldexp(unit(rng), 20)), -20);
    std::sort(cuts.begin(), cuts.end());
    std::vector<Interval> segs;
    for (int i = 0; i < k; ++i) {
      if (cuts[2 * i + 1] > cuts[2 * i]) segs.push_back({cuts[2 * i], cuts[2 * i + 1]});
    }
    return IntervalTrace{{0.0, 1.0}, segs, 0.0};
  };
  int differ = 0;
  for (int i = 0; i < 1000; ++i) {
    auto t = random_trace(1 + i % 12);
    if (nonconvexity(t) != nonconvexity_bruteforce(t)) ++differ;
    auto c = t.complement();
    if (nonconvexity(c) != nonconvexity_bruteforce(c)) ++differ;
  }
  o.check(differ == 0, fmt("Kadane == exhaustive search on 1000 traces and complements: %d differ", differ));

  // If E fills more than delta on both ends and NC < delta, the complement
  // fills at most delta in between.
  int checked = 0, broken = 0;
  for (int i = 0; i < 20000; ++i) {
    auto t = random_trace(1 + i % 6);
    const double delta = 0.05 + 0.3 * unit(rng);
    if (!(nonconvexity(t) < delta)) continue;
    double c = unit(rng), d = unit(rng);
    if (c > d) std::swap(c, d);
    auto mass = [&](double lo, double hi) {
      double m = 0.0;
      for (const auto& s : t.segments) m += std::max(0.0, std::min(hi, s.hi) - std::max(lo, s.lo));
      return m;
    };
    if (!(mass(0.0, c) > delta && mass(d, 1.0) > delta)) continue;
    ++checked;
    if ((d - c) - mass(c, d) > delta + 1e-12) ++broken;
  }
  o.check(broken == 0 && checked > 100, fmt("middle-gap lemma on %d constructed families: %d violations", checked, broken));
  const double elapsed = seconds_since(t0);
  o.check(elapsed < 120.0, fmt("runtime %.1f s < 2 min", elapsed));
  return o;
}

Outcome stability_split() {
  Outcome o;
  json random = {{"schema", 1},
                 {"name", "acceptance-fit-random"},
                 {"command", "halfspace-fit"},
                 {"seed", 401},
                 {"parameters",
                  {{"center", {0.0, 0.0, 0.0}},
                   {"radius", 1.0},
                   {"budget", 4000},
                   {"random_halfspaces", 20},
                   {"expect", "halfspace"},
                   {"max_error", 0.02}}}};
  auto r = run(random);
  double worst = 0.0;
  int fits = 0;
  for (const auto& c : r.comparisons) {
    worst = std::max(worst, c.observed["estimate"].get<double>());
    fits += c.verdict == lab::Verdict::pass;
  }
  o.check(fits == 20 && r.errors.empty(), fmt("20 random half-spaces: %d with holdout error <= 0.02 (worst %.4f)", fits, worst));

  json bilinear = {{"schema", 1},
                   {"name", "acceptance-fit-bilinear"},
                   {"command", "halfspace-fit"},
                   {"seed", 402},
                   {"parameters", {{"region", {{"type", "bilinear"}}}, {"center", {0.0, 1.0, 0.0}}, {"radius", 0.9},
                                   {"budget", 20000}, {"expect", "gap"}}}};
  auto b = run(bilinear);
  report_comparisons(o, b);
  return o;
}

Outcome kinematic_suite() {
  Outcome o;
  json m = {{"schema", 1},
            {"name", "acceptance-kinematic"},
            {"command", "kinematic-check"},
            {"seed", 501},
            {"parameters", {{"radii", {2.0, 4.0}}, {"lines", 10000}}}};
  report_comparisons(o, run(m));
  return o;
}

cuts::FiniteMetric random_metric(int n, std::mt19937_64& rng, bool path) {
  std::uniform_real_distribution<double> u(path ? 0.05 : 1.0, 2.0);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) d(i, j) = d(j, i) = u(rng);
  }
  if (path) {
    for (int k = 0; k < n; ++k) {
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) d(i, j) = std::min(d(i, j), d(i, k) + d(k, j));
      }
    }
  }
  return cuts::FiniteMetric(d);
}

bool sandwich(const cuts::FiniteMetric& d, const cuts::Distortion& r, double& worst) {
  auto dl = cuts::cut_metric(r.witness).matrix();
  bool ok = true;
  for (int i = 0; i < d.size(); ++i) {
    for (int j = i + 1; j < d.size(); ++j) {
      const double below = d(i, j) - dl(i, j), above = dl(i, j) - r.c1 * d(i, j);
      worst = std::max({worst, below, above});
      ok = ok && below <= 1e-7 && above <= 1e-7;
    }
  }
  return ok;
}

Outcome cut_cone_suite() {
  Outcome o;
  std::mt19937_64 rng(601);
  int off = 0, sandwiched = 0;
  double worst_c1 = 0.0, worst_gap = 0.0;
  for (int i = 0; i < 50; ++i) {
    auto d = random_metric(4, rng, i % 2 == 1);
    auto r = cuts::l1_distortion(d);
    worst_c1 = std::max(worst_c1, std::abs(r.c1 - 1.0));
    off += std::abs(r.c1 - 1.0) > 1e-7;
    sandwiched += sandwich(d, r, worst_gap);
  }
  o.check(off == 0, fmt("50 random 4-point metrics: c1 = 1 +- 1e-7 (worst |c1-1| = %.3g)", worst_c1));
  auto k23 = lab::k23_metric();
  auto k = cuts::l1_distortion(k23);
  o.check(k.c1 > 1.0 + 1e-7, fmt("c1(K_{2,3}) = %.12f > 1", k.c1));
  o.check(std::abs(k.c1 - k.dual_bound) <= 1e-7, fmt("primal %.12f = dual %.12f", k.c1, k.dual_bound));
  if (fixtures().has("c1_k23")) {
    const double want = fixtures().value("c1_k23")["c1"].get<double>();
    o.check(std::abs(k.c1 - want) <= 1e-7, fmt("matches fixture c1_k23 = %.12f", want));
  }
  sandwiched += sandwich(k23, k, worst_gap);
  o.check(sandwiched == 51, fmt("sandwich d <= d_witness <= c1 d entrywise on %d of 51 (worst excess %.3g)",
                                sandwiched, worst_gap));
  return o;
}

Outcome hierarchy_suite() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  int l1_off = 0, order_off = 0, residual_off = 0, failures = 0;
  double worst_l1 = 0.0, worst_order = 0.0, worst_residual = 0.0;
  for (int s = 0; s < 50; ++s) {
    auto inst = sparsest::random_instance(4 + s % 7, 700 + s);
    try {
      const double exact = sparsest::phi_exact(inst).value;
      const double l1 = sparsest::phi_l1(inst).value;
      const double met = sparsest::phi_met(inst).value;
      auto neg = sparsest::phi_neg(inst);
      worst_l1 = std::max(worst_l1, std::abs(l1 - exact));
      l1_off += std::abs(l1 - exact) > 1e-6;
      const double slack = std::max(met - neg.value, neg.value - l1);
      worst_order = std::max(worst_order, slack);
      order_off += slack > 1e-5;
      const double res = std::max(neg.residuals.at("primal"), neg.residuals.at("dual"));
      worst_residual = std::max(worst_residual, res);
      residual_off += res > 1e-6;
    } catch (const Error& e) {
      ++failures;
      o.check(false, fmt("instance %d: %s", s, e.what()));
    }
  }
  const double elapsed = seconds_since(t0);
  o.check(l1_off == 0, fmt("phi_l1 = phi_exact +- 1e-6 on 50 instances (worst %.3g)", worst_l1));
  o.check(order_off == 0, fmt("phi_met <= phi_neg <= phi_l1 +- 1e-5 (worst slack %.3g)", worst_order));
  o.check(residual_off == 0, fmt("SDP residuals <= 1e-6 (worst %.3g)", worst_residual));
  o.check(failures == 0, fmt("%d solver failures", failures));
  o.check(elapsed < 600.0, fmt("runtime %.1f s < 10 min", elapsed));
  return o;
}

Outcome duality_tightness() {
  Outcome o;
  if (!fixtures().has("duality_corpus")) {
    o.check(false, "fixture duality_corpus recorded");
    return o;
  }
  for (const auto& entry : fixtures().value("duality_corpus")) {
    const auto name = entry["name"].get<std::string>();
    const auto rows = entry["d2"].get<std::vector<std::vector<double>>>();
    Eigen::MatrixXd d(rows.size(), rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t j = 0; j < rows.size(); ++j) d(i, j) = rows[i][j];
    }
    auto di = sparsest::duality_instance(cuts::FiniteMetric(d));
    o.check(std::abs(di.reported_gap - di.c1) <= 1e-5 &&
                std::abs(di.c1 - entry["c1"].get<double>()) <= 1e-6,
            fmt("%s: reported gap %.9f, c1 %.9f (recorded %.9f)", name.c_str(), di.reported_gap, di.c1,
                entry["c1"].get<double>()));
  }
  return o;
}

Outcome heisenberg_suite() {
  Outcome o;
  int grids = 0, negative = 0;
  double worst = -INFINITY;
  for (int n = 1; n <= 8; ++n) {
    for (int k : {4, 8, 12, 16}) {
      if (k > (n + 1) * (n + 1) * (n + 1)) continue;
      for (std::uint64_t seed = 0; seed < 3; ++seed) {
        auto h = sparsest::heisenberg_instance(n, k, seed);
        auto c = cuts::negative_type_check(h.d2);
        ++grids;
        negative += c.negative_type;
        worst = std::max(worst, c.max_eigenvalue / c.threshold * 1e-8);
      }
    }
  }
  o.check(negative == grids, fmt("rho of negative type on %d of %d grid samples (largest eigenvalue / ||d|| = %.3g)",
                                 negative, grids, worst));
  int unit = 0;
  double off = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto h = sparsest::heisenberg_instance(1 + static_cast<int>(seed % 8), 4, 900 + seed);
    const double c1 = cuts::l1_distortion(h.d2).c1;
    off = std::max(off, std::abs(c1 - 1.0));
    unit += std::abs(c1 - 1.0) <= 1e-7;
  }
  o.check(unit == 20, fmt("k = 4 subsamples: c1 = 1 +- 1e-7 on %d of 20 (worst %.3g)", unit, off));
  return o;
}

// Everything in a report except the clock.
std::string numbers_of(const lab::RunReport& r) {
  auto j = r.to_json();
  j.erase("started_at");
  j.erase("wall_time_s");
  std::string out = j.dump();
  for (const auto& t : r.tables) out += t.csv();
  return out;
}

Outcome reproducibility() {
  Outcome o;
  const std::vector<json> manifests = {
      {{"command", "nm-scan"}, {"parameters", {{"region", {{"type", "bilinear"}}}, {"center", {0, 1, 0}}, {"radii", {0.3, 0.9}}, {"lines", 400}}}},
      {{"command", "halfspace-fit"}, {"parameters", {{"budget", 1500}, {"random_halfspaces", 3}, {"center", {0, 0, 0}}}}},
      {{"command", "stability-curve"}, {"parameters", {{"etas", {0.0, 1.0}}, {"lines", 300}, {"budget", 1000}}}},
      {{"command", "kinematic-check"}, {"parameters", {{"radii", {1.0, 2.0}}, {"lines", 300}}}},
      {{"command", "distortion"}, {"parameters", {{"grid", 2}, {"points", 7}, {"trials", 3}}}},
      {{"command", "gap-lab"}, {"parameters", {{"grids", {1, 2}}, {"points", 6}, {"trials", 2}}}},
      {{"command", "compression"}, {"parameters", {{"map", "identity"}, {"radius", 4}}}},
      {{"command", "collapse-scan"}, {"parameters", {{"map", "horizontal"}, {"radius", 4}}}},
  };
  const auto dir = std::filesystem::temp_directory_path() / ("heislab-acceptance-" + std::to_string(::getpid()));
  for (auto m : manifests) {
    const auto command = m["command"].get<std::string>();
    m["schema"] = 1;
    m["name"] = command;
    m["seed"] = 1001;
    auto manifest = lab::ExperimentManifest::from_json(m);
    auto a = lab::run_experiment(manifest, {HEISLAB_FIXTURES_FILE});
    auto b = lab::run_experiment(manifest, {HEISLAB_FIXTURES_FILE});
    manifest.workers = 3;
    auto c = lab::run_experiment(manifest, {HEISLAB_FIXTURES_FILE});
    const auto na = numbers_of(a);
    // Reports embed the manifest, which records the worker count.
    c.manifest.workers = 1;
    bool files = true;
    auto fa = lab::write_artifacts(a, dir / "a"), fb = lab::write_artifacts(b, dir / "b");
    for (std::size_t i = 0; i < fa.size(); ++i) {
      if (fa[i].extension() != ".csv") continue;
      std::ifstream x(fa[i]), y(fb[i]);
      std::stringstream sx, sy;
      sx << x.rdbuf();
      sy << y.rdbuf();
      files = files && sx.str() == sy.str();
    }
    o.check(na == numbers_of(b) && files, command + ": rerun bit-identical");
    o.check(na == numbers_of(c), command + ": 1 and 3 workers identical");
  }
  std::filesystem::remove_all(dir);
  return o;
}

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "group and metric invariants", group_metric_suite},
      {2, "cc distance closed forms and box-ball constants", distance_checks},
      {3, "monotonicity suite", monotonicity_suite},
      {4, "half-space fit: stable vs bilinear", stability_split},
      {5, "kinematic suite", kinematic_suite},
      {6, "cut cone suite", cut_cone_suite},
      {7, "sparsest cut hierarchy", hierarchy_suite},
      {8, "duality tightness on the corpus", duality_tightness},
      {9, "heisenberg instances", heisenberg_suite},
      {10, "reproducibility", reproducibility},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failed = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.check(false, std::string("threw: ") + e.what());
    }
    for (const auto& line : o.lines) std::printf("    %s\n", line.c_str());
    std::printf("%s criterion %d: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.title, seconds_since(t0));
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
