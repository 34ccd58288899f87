#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>

#include "doctest.h"
#include "heislab/core/distance.hpp"
#include "heislab/core/word_metric.hpp"
#include "heislab/cuts/compression.hpp"
#include "heislab/cuts/l1.hpp"
#include "heislab/cuts/lp.hpp"
#include "heislab/cuts/metric.hpp"
#include "heislab/error.hpp"

using namespace heislab;
using namespace heislab::cuts;

namespace {

// Symmetric entries in [1, 2] always satisfy the triangle inequality.
FiniteMetric random_metric(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(1.0, 2.0);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) d(i, j) = d(j, i) = u(rng);
  }
  return FiniteMetric(d);
}

// Shortest-path closure of random weights; far from equilateral.
FiniteMetric random_path_metric(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.05, 2.0);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) d(i, j) = d(j, i) = u(rng);
  }
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) d(i, j) = std::min(d(i, j), d(i, k) + d(k, j));
    }
  }
  return FiniteMetric(d);
}

FiniteMetric k23() {
  return FiniteMetric::graph_metric(5, {{0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 4}});
}

double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

void check_duality(const LpResult& r) {
  REQUIRE(r.status == LpStatus::optimal);
  CHECK(std::abs(r.objective - r.dual_objective) <= 1e-7 * std::max(1.0, std::abs(r.objective)));
  CHECK(r.primal_residual <= 1e-7);
  CHECK(r.dual_residual <= 1e-7);
}

}  // namespace

TEST_CASE("lp: small textbook problem") {
  LinearProgram lp;
  int x = lp.add_column(-3.0), y = lp.add_column(-5.0);
  int r0 = lp.add_row(RowSense::le, 4.0), r1 = lp.add_row(RowSense::le, 12.0), r2 = lp.add_row(RowSense::le, 18.0);
  lp.set(r0, x, 1.0);
  lp.set(r1, y, 2.0);
  lp.set(r2, x, 3.0);
  lp.set(r2, y, 2.0);
  auto r = solve(lp);
  check_duality(r);
  CHECK(r.objective == doctest::Approx(-36.0).epsilon(1e-12));
  CHECK(r.x[x] == doctest::Approx(2.0));
  CHECK(r.x[y] == doctest::Approx(6.0));
  CHECK(r.duals[r0] == doctest::Approx(0.0));
  CHECK(r.duals[r1] == doctest::Approx(-1.5));
  CHECK(r.duals[r2] == doctest::Approx(-1.0));
}

TEST_CASE("lp: equality, ge rows and bounded columns") {
  // min x + 2y + 3z, x + y + z = 1, x - y >= -0.5, x <= 0.2, z free.
  LinearProgram lp;
  int x = lp.add_column(1.0, 0.0, 0.2), y = lp.add_column(2.0), z = lp.add_column(3.0, -LinearProgram::inf);
  int e = lp.add_row(RowSense::eq, 1.0), g = lp.add_row(RowSense::ge, -0.5);
  lp.set(e, x, 1.0);
  lp.set(e, y, 1.0);
  lp.set(e, z, 1.0);
  lp.set(g, x, 1.0);
  lp.set(g, y, -1.0);
  auto r = solve(lp);
  check_duality(r);
  // Optimum: x = 0.2, y = 0.7, z = 0.1.
  CHECK(r.x[x] == doctest::Approx(0.2));
  CHECK(r.x[y] == doctest::Approx(0.7));
  CHECK(r.x[z] == doctest::Approx(0.1));
  CHECK(r.objective == doctest::Approx(1.9));
}

TEST_CASE("lp: infeasible and unbounded") {
  LinearProgram bad;
  int x = bad.add_column(1.0);
  bad.set(bad.add_row(RowSense::ge, 1.0), x, 1.0);
  bad.set(bad.add_row(RowSense::le, 0.0), x, 1.0);
  auto r = solve(bad);
  CHECK(r.status == LpStatus::infeasible);
  CHECK(r.phase1_objective > 0.0);

  LinearProgram open;
  int y = open.add_column(-1.0);
  open.set(open.add_row(RowSense::ge, 0.0), y, 1.0);
  CHECK(solve(open).status == LpStatus::unbounded);
}

TEST_CASE("lp: Beale cycling example terminates") {
  LinearProgram lp;
  int x4 = lp.add_column(-0.75), x5 = lp.add_column(150.0), x6 = lp.add_column(-0.02), x7 = lp.add_column(6.0);
  int a = lp.add_row(RowSense::le, 0.0), b = lp.add_row(RowSense::le, 0.0), c = lp.add_row(RowSense::le, 1.0);
  lp.set(a, x4, 0.25);
  lp.set(a, x5, -60.0);
  lp.set(a, x6, -0.04);
  lp.set(a, x7, 9.0);
  lp.set(b, x4, 0.5);
  lp.set(b, x5, -90.0);
  lp.set(b, x6, -0.02);
  lp.set(b, x7, 3.0);
  lp.set(c, x6, 1.0);
  LpOptions opt;
  opt.degenerate_before_bland = 1;
  auto r = solve(lp, opt);
  check_duality(r);
  CHECK(r.objective == doctest::Approx(-0.05));
  check_duality(solve(lp));
}

TEST_CASE("lp: random feasible problems satisfy strong duality") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 60; ++trial) {
    const int m = 3 + trial % 7, n = 4 + trial % 9;
    LinearProgram lp;
    std::vector<double> x0(n);
    for (int j = 0; j < n; ++j) {
      x0[j] = 0.5 + 0.5 * u(rng);
      lp.add_column(u(rng), 0.0, 2.0);
    }
    for (int i = 0; i < m; ++i) {
      std::vector<double> row(n);
      double act = 0.0;
      for (int j = 0; j < n; ++j) act += (row[j] = u(rng)) * x0[j];
      RowSense s = static_cast<RowSense>(i % 3);
      int r = lp.add_row(s, s == RowSense::le ? act + 0.1 : s == RowSense::ge ? act - 0.1 : act);
      for (int j = 0; j < n; ++j) lp.set(r, j, row[j]);
    }
    check_duality(solve(lp));
  }
}

TEST_CASE("lp: validation") {
  LinearProgram lp;
  lp.add_column(1.0, 2.0, 1.0);
  CHECK_THROWS_AS(solve(lp), Error);
  LinearProgram lp2;
  lp2.add_column(1.0);
  lp2.set(3, 0, 1.0);
  CHECK_THROWS_AS(solve(lp2), Error);
}

TEST_CASE("finite metric validation and csv") {
  Eigen::MatrixXd d(3, 3);
  d << 0, 1, 3, 1, 0, 1, 3, 1, 0;
  CHECK_THROWS_AS(FiniteMetric{d}, Error);
  d(0, 2) = d(2, 0) = 2.0;
  FiniteMetric m(d);
  CHECK(m.max_entry() == 2.0);
  Eigen::MatrixXd asym = d;
  asym(0, 1) = 1.5;
  CHECK_THROWS_AS(FiniteMetric{asym}, Error);
  Eigen::MatrixXd diag = d;
  diag(1, 1) = 0.1;
  CHECK_THROWS_AS(FiniteMetric{diag}, Error);

  auto path = std::filesystem::temp_directory_path() / "heislab_metric_test.csv";
  m.write_csv(path);
  auto back = FiniteMetric::read_csv(path);
  CHECK(back.matrix() == m.matrix());
  {
    std::ofstream out(path);
    out << "2\n0,1\n1,0,3\n";
  }
  CHECK_THROWS_AS(FiniteMetric::read_csv(path), Error);
  std::filesystem::remove(path);

  CHECK(pair_index(4, 0, 1) == 0);
  CHECK(pair_index(4, 2, 3) == 5);
  CHECK(pair_index(4, 3, 1) == pair_index(4, 1, 3));
}

TEST_CASE("cut_metric examples") {
  CutMeasure one(2);
  one.add(0b01, 1.0);
  CHECK(cut_metric(one).matrix() == Eigen::Matrix2d{{0, 1}, {1, 0}});
  CHECK(cut_metric(CutMeasure(4)).matrix() == Eigen::MatrixXd::Zero(4, 4));
  CutMeasure m(3);
  m.add(0b001, 1.0);
  m.add(0b011, 1.0);
  auto d = cut_metric(m);
  CHECK(d(0, 1) == 1.0);
  CHECK(d(0, 2) == 2.0);
  CHECK(d(1, 2) == 1.0);
  // Complements merge.
  m.add(0b110, 0.5);
  CHECK(m.entries().size() == 2);
  CHECK_THROWS_AS(m.add(0b111, 1.0), Error);
  CHECK_THROWS_AS(m.add(0b1000, 1.0), Error);
  CHECK_THROWS_AS(m.add(0b010, -1.0), Error);

  auto back = CutMeasure::from_json(m.to_json(), 3);
  REQUIRE(back.entries().size() == m.entries().size());
  for (std::size_t i = 0; i < back.entries().size(); ++i) {
    CHECK(back.entries()[i].cut == m.entries()[i].cut);
    CHECK(back.entries()[i].weight == m.entries()[i].weight);
  }
  CHECK_THROWS_AS(CutMeasure::from_json(nlohmann::json::parse(R"([{"cut":"12","w":1}])"), 3), Error);
  CHECK_THROWS_AS(CutMeasure::from_json(nlohmann::json::parse(R"([{"cut":"0x1","w":1,"x":2}])"), 3), Error);

  auto cuts = all_cuts(5);
  CHECK(cuts.size() == 15);
  for (auto c : cuts) CHECK((c & 1u) == 0u);
}

TEST_CASE("negative type") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  Eigen::MatrixXd pts(12, 3);
  for (int i = 0; i < 12; ++i) pts.row(i) << g(rng), g(rng), g(rng);
  Eigen::MatrixXd sq(12, 12);
  for (int i = 0; i < 12; ++i) {
    for (int j = 0; j < 12; ++j) sq(i, j) = (pts.row(i) - pts.row(j)).squaredNorm();
  }
  auto r = negative_type_check(sq);
  CHECK(r.negative_type);
  CHECK(r.max_eigenvalue <= r.threshold);

  std::vector<core::Point> grid;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      for (int c = 0; c < 3; ++c) grid.push_back({double(a), double(b), double(c)});
    }
  }
  Eigen::MatrixXd rho(27, 27);
  for (int i = 0; i < 27; ++i) {
    for (int j = 0; j < 27; ++j) rho(i, j) = i == j ? 0.0 : core::rho_distance(grid[i], grid[j]);
  }
  CHECK(negative_type_check(FiniteMetric(rho)).negative_type);

  // Randomized search for a violator.
  bool found = false;
  for (int trial = 0; trial < 200 && !found; ++trial) {
    auto d = random_path_metric(6, rng);
    auto res = negative_type_check(d);
    if (res.negative_type) continue;
    found = true;
    REQUIRE(res.certificate);
    const Eigen::VectorXd& c = *res.certificate;
    CHECK(std::abs(c.sum()) < 1e-12);
    double q = 0.0;
    for (int i = 0; i < 6; ++i) {
      for (int j = 0; j < 6; ++j) q += c(i) * c(j) * d(i, j);
    }
    CHECK(q > 0.0);
    CHECK(q == doctest::Approx(res.max_eigenvalue).epsilon(1e-9));
  }
  CHECK(found);

  // Cut metrics are of negative type.
  for (int trial = 0; trial < 20; ++trial) {
    CutMeasure m(7);
    std::uniform_int_distribution<std::uint64_t> cut(1, 127 - 1);
    for (int k = 0; k < 5; ++k) {
      std::uint64_t s = cut(rng);
      if (s != 0 && s != 127) m.add(s, 0.1 + std::uniform_real_distribution<double>(0, 1)(rng));
    }
    CHECK(negative_type_check(cut_metric(m)).negative_type);
  }
}

TEST_CASE("cone membership") {
  std::mt19937_64 rng(5);
  CutMeasure m(6);
  m.add(0b000110, 1.0);
  m.add(0b101010, 0.5);
  m.add(0b111110, 2.0);
  auto d = cut_metric(m);
  auto r = l1_cone_membership(d);
  REQUIRE(r.feasible);
  CHECK(max_abs_diff(cut_metric(*r.witness).matrix(), d.matrix()) <= 1e-8);

  for (int trial = 0; trial < 50; ++trial) {
    auto d4 = random_metric(4, rng);
    auto c = l1_cone_membership(d4);
    REQUIRE(c.feasible);
    CHECK(max_abs_diff(cut_metric(*c.witness).matrix(), d4.matrix()) <= 1e-8);
  }
  CHECK(l1_cone_membership(FiniteMetric::graph_metric(4, {{0, 1}, {0, 2}, {0, 3}})).feasible);

  auto k = k23();
  auto inf = l1_cone_membership(k);
  REQUIRE_FALSE(inf.feasible);
  REQUIRE(inf.certificate.size() == 10);
  auto cm = cut_matrix(5, all_cuts(5));
  for (Eigen::Index s = 0; s < cm.cols(); ++s) {
    double v = 0.0;
    for (int p = 0; p < 10; ++p) v += inf.certificate[p] * cm(p, s);
    CHECK(v <= 1e-9);
  }
  double on_d = 0.0;
  int p = 0;
  for (int i = 0; i < 5; ++i) {
    for (int j = i + 1; j < 5; ++j) on_d += inf.certificate[p++] * k(i, j);
  }
  CHECK(on_d > 1e-6);

  CHECK_THROWS_AS(l1_cone_membership(random_metric(17, rng)), Error);
}

TEST_CASE("distortion") {
  std::mt19937_64 rng(9);
  CutMeasure m(5);
  m.add(0b00110, 1.0);
  m.add(0b01010, 3.0);
  m.add(0b11110, 2.0);
  m.add(0b10000, 1.0);
  auto cutd = l1_distortion(cut_metric(m));
  CHECK(cutd.c1 == doctest::Approx(1.0).epsilon(1e-8));
  check_duality(cutd.lp);

  for (int trial = 0; trial < 10; ++trial) {
    auto r = l1_distortion(random_metric(4, rng));
    CHECK(std::abs(r.c1 - 1.0) <= 1e-7);
  }

  auto k = l1_distortion(k23());
  check_duality(k.lp);
  CHECK(k.c1 > 1.0 + 1e-6);
  CHECK(std::abs(k.c1 - k.dual_bound) <= 1e-7);
  CHECK_FALSE(l1_cone_membership(k23()).feasible);

  for (int trial = 0; trial < 4; ++trial) {
    auto d8 = trial % 2 ? random_metric(8, rng) : random_path_metric(8, rng);
    auto full = l1_distortion(d8);
    check_duality(full.lp);
    // Sandwich round trip.
    auto dl = cut_metric(full.witness).matrix();
    for (int i = 0; i < 8; ++i) {
      for (int j = i + 1; j < 8; ++j) {
        CHECK(dl(i, j) >= d8(i, j) - 1e-7);
        CHECK(dl(i, j) <= full.c1 * d8(i, j) + 1e-7);
      }
    }
    // Duals are nonnegative and certify the bound.
    for (double a : full.alpha) CHECK(a >= 0.0);
    for (double b : full.beta) CHECK(b >= 0.0);
    // Scale invariance.
    for (double alpha : {0.1, 3.0}) CHECK(std::abs(l1_distortion(d8.scaled(alpha)).c1 - full.c1) <= 1e-7);
    // Monotone under point deletion.
    auto sub = l1_distortion(d8.restrict_to({0, 2, 3, 5, 6, 7}));
    CHECK(sub.c1 <= full.c1 + 1e-7);
    CHECK(sub.c1 >= 1.0 - 1e-9);
  }

  auto big = l1_distortion(random_path_metric(12, rng));
  check_duality(big.lp);
  CHECK(big.c1 >= 1.0);

  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(3, 3);
  z(0, 2) = z(2, 0) = z(1, 2) = z(2, 1) = 1.0;
  CHECK_THROWS_AS(l1_distortion(FiniteMetric(z)), Error);
}

TEST_CASE("compression rate") {
  const int radius = 4;
  core::WordBall ball(radius);
  const auto& pts = ball.elements();
  GridMap proj, constant, ident;
  for (const auto& g : pts) {
    proj[g] = {double(g.a), double(g.b)};
    constant[g] = {1.0};
    ident[g] = {double(g.a), double(g.b), double(g.c)};
  }
  auto t = compression_rate(pts, proj, radius);
  CHECK(t.lipschitz == 1.0);
  CHECK(t.max_distance == 2 * radius);
  // Largest central distance among pairs of the ball.
  core::WordBall doubled(2 * radius);
  int max_central = 0;
  for (const auto& x : pts) {
    for (const auto& y : pts) {
      if (x.a == y.a && x.b == y.b && x.c != y.c) {
        max_central = std::max(max_central, *doubled.distance(core::inverse(x) * y));
      }
    }
  }
  REQUIRE(max_central > 0);
  for (int s = 1; s <= max_central; ++s) CHECK(t.omega[s - 1] == 0.0);

  auto c = compression_rate(pts, constant, radius);
  CHECK(c.lipschitz == 0.0);
  for (double w : c.omega) CHECK(w == 0.0);

  double prev = 0.0;
  for (int r : {4, 6}) {
    core::WordBall b(r);
    GridMap f;
    for (const auto& g : b.elements()) f[g] = {double(g.a), double(g.b), double(g.c)};
    double lip = compression_rate(b.elements(), f, r).lipschitz;
    CHECK(lip > prev);
    prev = lip;
  }

  CHECK_THROWS_AS(compression_rate({}, proj, radius), Error);
  CHECK_THROWS_AS(compression_rate({{9, 0, 0}}, proj, radius), Error);

  auto j = to_json(ident);
  auto back = read_grid_map(j);
  CHECK(back == ident);
  CHECK_THROWS_AS(read_grid_map(nlohmann::json::parse(R"([{"point":[0,0],"image":[1]}])")), Error);
}

TEST_CASE("collapse scan") {
  const int radius = 4;
  core::WordBall ball(radius);
  const auto& pts = ball.elements();
  GridMap proj, noise;
  std::mt19937_64 rng(2);
  std::bernoulli_distribution coin;
  for (const auto& g : pts) {
    proj[g] = {double(g.a), double(g.b)};
    std::vector<double> v(8);
    for (auto& x : v) x = coin(rng) ? 1.0 : -1.0;
    noise[g] = v;
  }
  auto rows = collapse_scan(pts, proj, radius, 0.5);
  REQUIRE(rows.size() == radius);
  bool any = false;
  for (const auto& r : rows) {
    if (r.pairs == 0) {
      CHECK(std::isnan(r.fraction));
      continue;
    }
    any = true;
    CHECK(r.fraction == 1.0);
  }
  CHECK(any);
  for (const auto& r : collapse_scan(pts, noise, radius, std::numeric_limits<double>::infinity())) {
    if (r.pairs) CHECK(r.fraction == 1.0);
  }
  for (const auto& r : collapse_scan(pts, noise, radius, 0.5)) {
    if (!r.pairs) continue;
    CHECK(r.fraction >= 0.0);
    CHECK(r.fraction <= 1.0);
    CHECK(r.std_error == doctest::Approx(std::sqrt(r.fraction * (1 - r.fraction) / double(r.pairs))));
  }
}
