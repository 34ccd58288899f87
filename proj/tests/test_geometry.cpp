#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "doctest.h"
#include "heislab/core/automorphism.hpp"
#include "heislab/core/distance.hpp"
#include "heislab/error.hpp"
#include "heislab/geometry/boundary.hpp"
#include "heislab/geometry/column_oracle.hpp"
#include "heislab/random.hpp"
#include "heislab/geometry/halfspace_fit.hpp"
#include "heislab/geometry/kinematic.hpp"
#include "heislab/geometry/line_pairs.hpp"
#include "heislab/geometry/monotonicity.hpp"
#include "heislab/geometry/perimeter_split.hpp"

using namespace heislab;
using namespace heislab::geometry;
using core::HalfSpace;
using core::Point;

namespace {

constexpr double pi = std::numbers::pi;

bool near(const Point& p, const Point& q, double tol) {
  return std::abs(p.a - q.a) <= tol && std::abs(p.b - q.b) <= tol && std::abs(p.c - q.c) <= tol;
}

// Coordinate residual of p against the point of `l` over the same foot,
// relative to the size of the coordinates.
double off_line(const HorizontalLine& l, const Point& p) {
  Point q = l.at(l.foot(p));
  double scale = 1.0 + std::abs(p.a) + std::abs(p.b) + std::abs(p.c) + std::abs(l.base.a) + std::abs(l.base.b);
  double d = std::max({std::abs(p.a - q.a), std::abs(p.b - q.b), std::abs(p.c - q.c)});
  return d / (scale * scale);
}

IntervalTrace make_trace(Interval window, std::vector<Interval> segs) {
  return {window, std::move(segs), 0.0};
}

// Random trace with up to k segments on [0, 1].
IntervalTrace random_trace(std::mt19937_64& rng, int k) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> cuts(2 * k);
  for (auto& c : cuts) c = u(rng);
  std::sort(cuts.begin(), cuts.end());
  std::vector<Interval> segs;
  for (int i = 0; i < k; ++i) {
    if (cuts[2 * i + 1] > cuts[2 * i]) segs.push_back({cuts[2 * i], cuts[2 * i + 1]});
  }
  return make_trace({0.0, 1.0}, segs);
}

Region slabs(double thickness) {
  return Region::custom("slabs", [thickness](const Point& p) {
    double k = std::floor(p.a / thickness);
    return static_cast<std::int64_t>(k) % 2 == 0;
  });
}

}  // namespace

TEST_CASE("line_through examples") {
  auto l = line_through(core::identity, 0.0);
  CHECK(near(l.at(2.5), {2.5, 0, 0}, 1e-15));
  l = line_through({0, 0, 1}, 0.0);
  CHECK(near(l.at(-3.0), {-3, 0, 1}, 1e-15));
  l = line_through({1, 0, 0}, pi / 2);
  CHECK(near(l.at(0.7), {1, 0.7, 0.7}, 1e-15));
  CHECK(line_through(core::identity, -pi / 2).theta == doctest::Approx(1.5 * pi));
}

TEST_CASE("lines are horizontal geodesics parameterized by arc length") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 200; ++i) {
    auto l = line_through({u(rng), u(rng), u(rng)}, u(rng) * pi);
    double s = u(rng), t = u(rng);
    CHECK(core::cc_distance(l.at(s), l.at(t)) == doctest::Approx(std::abs(s - t)).epsilon(1e-9));
    Point g{u(rng), u(rng), u(rng)};
    auto m = translate(g, l);
    CHECK(near(m.at(t), core::multiply(g, l.at(t)), 1e-12));
  }
}

TEST_CASE("ball pieces match dense membership") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int hits = 0, split = 0;
  for (int i = 0; i < 150; ++i) {
    Point c{u(rng), u(rng), u(rng)};
    double r = 0.3 + 0.7 * std::abs(u(rng));
    auto l = sample_line(c, r, 77, i);
    auto pieces = ball_pieces(l, c, r);
    REQUIRE_FALSE(pieces.empty());
    ++hits;
    if (pieces.size() > 1) ++split;
    CHECK(distance_to_line(l, c) < r);
    // Dense scan: in-ball parameters are exactly those inside a piece.
    double t0 = l.foot(c);
    for (int k = 0; k <= 400; ++k) {
      double t = t0 - r + 2.0 * r * k / 400.0;
      bool in = core::cc_distance(c, l.at(t)) < r;
      bool deep = false, near_edge = false;
      for (auto [lo, hi] : pieces) {
        deep = deep || (t > lo + 1e-9 && t < hi - 1e-9);
        near_edge = near_edge || std::abs(t - lo) <= 1e-9 || std::abs(t - hi) <= 1e-9;
      }
      if (!near_edge) CHECK(in == deep);
    }
  }
  CHECK(hits == 150);
  // Balls are not convex along horizontal lines.
  CHECK(split > 0);
  // A far line misses.
  CHECK_FALSE(ball_window(line_through({0, 5, 0}, 0.0), core::identity, 1.0));
}

TEST_CASE("sample_lines contract") {
  CHECK_THROWS_AS(sample_lines(core::identity, 1.0, 0, 1), Error);
  auto lines = sample_lines({0.3, -0.2, 0.1}, 0.5, 4000, 9);
  double mass = 0.0;
  int near_diag = 0;
  for (const auto& s : lines) {
    CHECK(distance_to_line(s.line, {0.3, -0.2, 0.1}) < 0.5);
    mass += s.weight;
    if (std::abs(s.line.theta - pi / 4) < 0.1) ++near_diag;
  }
  CHECK(mass == doctest::Approx(1.0));
  double p = 0.2 / (2 * pi);
  double sigma = std::sqrt(p * (1 - p) / lines.size());
  CHECK(std::abs(static_cast<double>(near_diag) / lines.size() - p) <= 3 * sigma);
  auto g = sample_lines({0, 0, 0}, 2.0, 10, 9, LineNormalization::global);
  CHECK(g[0].weight * 10 == doctest::Approx(8.0));
  // Bit-identical for any worker count.
  auto a = sample_lines({0, 0, 0}, 1.0, 300, 4, LineNormalization::unit_mass, 1);
  auto b = sample_lines({0, 0, 0}, 1.0, 300, 4, LineNormalization::unit_mass, 3);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].line.theta == b[i].line.theta);
    CHECK(a[i].line.base.c == b[i].line.base.c);
  }
}

TEST_CASE("mean chord length is left-invariant") {
  auto chord = [](const Point& c) {
    auto lines = sample_lines(c, 1.0, 3000, 21, LineNormalization::global);
    std::vector<double> v;
    for (const auto& s : lines) {
      auto w = ball_window(s.line, c, 1.0);
      v.push_back(w->second - w->first);
    }
    return mean_estimate(v, 1.0, 21);
  };
  auto e0 = chord(core::identity);
  auto e1 = chord({3.0, -2.0, 5.0});
  double sigma = std::hypot(e0.std_error, e1.std_error);
  CHECK(std::abs(e0.value - e1.value) <= 3 * sigma);
}

TEST_CASE("restrict examples") {
  auto x_axis = line_through(core::identity, 0.0);
  auto full = restrict_to_line(Region::full_space(), x_axis, core::identity, 1.0, 1.0 / 512);
  REQUIRE(full.segments.size() == 1);
  CHECK(full.segments[0] == full.window);
  CHECK(full.window.lo == doctest::Approx(-1.0).epsilon(1e-9));

  auto half = Region::halfspace(HalfSpace({1, 0, 0}, 0.0));
  double step = 1.0 / 512;
  auto t = restrict_to_line(half, x_axis, core::identity, 1.0, step);
  REQUIRE(t.segments.size() == 1);
  CHECK(std::abs(t.segments[0].hi) <= step / 1024);
  CHECK(t.valid());

  auto empty = restrict_to_line(half, line_through({0, 4, 0}, 0.0), core::identity, 1.0, step);
  CHECK(empty.empty_window());
  CHECK(empty.segments.empty());
  CHECK_THROWS_AS(restrict_to_line(half, x_axis, core::identity, 1.0, 0.0), Error);
}

TEST_CASE("restrict of the bilinear set matches the quadratic") {
  // Along L(t) = (a + tu, b + tv, c + t(av - bu)), z - xy is the quadratic
  // -uv t^2 + (av - bu - av - bu) t + c - ab = -uv t^2 - 2bu t + c - ab.
  auto e = Region::bilinear();
  const Point center{0, 1, 0};
  for (int i = 0; i < 40; ++i) {
    double r = 0.2, step = r / 512;
    auto l = sample_line(center, r, 3, i);
    auto tr = restrict_to_line(e, l, center, r, step);
    REQUIRE_FALSE(tr.empty_window());
    auto in = [&](double t) {
      double A = -l.u() * l.v(), B = -2.0 * l.base.b * l.u(), C = l.base.c - l.base.a * l.base.b;
      return A * t * t + B * t + C <= 0.0;
    };
    for (int k = 0; k <= 200; ++k) {
      double t = tr.window.lo + (tr.window.hi - tr.window.lo) * k / 200.0;
      bool in_ball = false;
      for (const auto& p : tr.parts()) in_ball = in_ball || (t >= p.lo && t <= p.hi);
      if (!in_ball) continue;
      bool traced = false;
      double gap = INFINITY;
      for (const auto& s : tr.segments) {
        traced = traced || (t >= s.lo && t <= s.hi);
        gap = std::min({gap, std::abs(t - s.lo), std::abs(t - s.hi)});
      }
      if (gap > step) CHECK(traced == in(t));
    }
  }
}

TEST_CASE("nonconvexity examples") {
  CHECK(nonconvexity(make_trace({0, 3}, {{0.5, 2}})) == 0.0);
  CHECK(nonconvexity(make_trace({0, 3}, {{0, 1}, {1.5, 2.5}})) == doctest::Approx(0.5));
  CHECK(nonconvexity(make_trace({0, 3}, {})) == 0.0);
  CHECK(nonconvexity_bruteforce(make_trace({0, 3}, {{0, 1}, {1.5, 2.5}})) == doctest::Approx(0.5));
}

TEST_CASE("Kadane agrees with exhaustive search") {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 1000; ++i) {
    auto t = random_trace(rng, 1 + i % 12);
    CHECK(nonconvexity(t) == doctest::Approx(nonconvexity_bruteforce(t)).epsilon(1e-12));
    auto c = t.complement();
    CHECK(nonconvexity(c) == doctest::Approx(nonconvexity_bruteforce(c)).epsilon(1e-12));
  }
}

TEST_CASE("middle gap is small when NC is small") {
  // E-mass > delta on [a,c] and [d,b], NC < delta  =>  |[c,d] ∩ E'| <= delta.
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0;
  for (int i = 0; i < 20000; ++i) {
    auto t = random_trace(rng, 1 + i % 6);
    double delta = 0.05 + 0.3 * u(rng);
    if (!(nonconvexity(t) < delta)) continue;
    double c = u(rng), d = u(rng);
    if (c > d) std::swap(c, d);
    auto mass_in = [&](double lo, double hi) {
      double m = 0.0;
      for (const auto& s : t.segments) m += std::max(0.0, std::min(hi, s.hi) - std::max(lo, s.lo));
      return m;
    };
    if (!(mass_in(0.0, c) > delta && mass_in(d, 1.0) > delta)) continue;
    double gap_out = (d - c) - mass_in(c, d);
    CHECK(gap_out <= delta + 1e-12);
    ++checked;
  }
  CHECK(checked > 100);
}

TEST_CASE("nonmonotonicity on single lines") {
  auto half = Region::halfspace(HalfSpace({0.3, -1, 0}, 0.1));
  double step = 1.0 / 512;
  for (int i = 0; i < 20; ++i) {
    auto l = sample_line(core::identity, 1.0, 2, i);
    CHECK(nonmonotonicity_line(half, l, core::identity, 1.0, step) <= 2 * step);
  }
  auto balls = Region::unite({Region::ball({-0.5, 0, 0}, 0.2), Region::ball({0.5, 0, 0}, 0.2)});
  auto x_axis = line_through(core::identity, 0.0);
  double nm = nonmonotonicity_line(balls, x_axis, core::identity, 1.0, step);
  CHECK(nm > 0.1);
  auto t = restrict_to_line(balls, x_axis, core::identity, 1.0, step);
  CHECK(nonmonotonicity(t) == nonmonotonicity(t.complement()));
}

TEST_CASE("NM total of monotone sets vanishes") {
  auto half = Region::halfspace(HalfSpace({1, 0, 0}, 0.0));
  auto e = nonmonotonicity_total(half, core::identity, 1.0, 2000, 1);
  CHECK(e.within_sigmas(0.0, 3.0));
  CHECK(e.value < 1e-3);
  auto bil = nonmonotonicity_total(Region::bilinear(), {0, 1, 0}, 0.2, 1000, 2);
  CHECK(bil.within_sigmas(0.0, 3.0));
}

TEST_CASE("NM total of a small ball matches a dense-grid reference") {
  auto e = Region::ball(core::identity, 0.3);
  const double r = 1.0;
  auto est = nonmonotonicity_total(e, core::identity, r, 400, 31, {.step = 1e-3});
  // Reference: the same lines, indicator on a uniform grid of spacing 1e-3,
  // NC by exhaustive search over grid runs.
  auto lines = sample_lines(core::identity, r, 400, 31, LineNormalization::global);
  std::vector<double> ref;
  for (const auto& s : lines) {
    auto w = ball_window(s.line, core::identity, r);
    auto n = static_cast<int>(std::ceil((w->second - w->first) / 1e-3));
    double h = (w->second - w->first) / n;
    std::vector<Interval> segs;
    for (int k = 0; k < n; ++k) {
      double mid = w->first + (k + 0.5) * h;
      if (!e.contains(s.line.at(mid))) continue;
      double lo = w->first + k * h;
      if (!segs.empty() && segs.back().hi == lo) {
        segs.back().hi = lo + h;
      } else {
        segs.push_back({lo, lo + h});
      }
    }
    auto t = make_trace({w->first, w->second}, segs);
    ref.push_back(nonconvexity_bruteforce(t) + nonconvexity_bruteforce(t.complement()));
  }
  auto reference = mean_estimate(ref, 1.0, 31);
  CHECK(est.value > 0.0);
  CHECK(std::abs(est.value - reference.value) <= 3 * reference.std_error + 4e-3);
}

TEST_CASE("NM invariances") {
  auto e = Region::ball({0.2, 0.1, 0.0}, 0.4);
  const Point c{0, 0, 0};
  auto base = nonmonotonicity_total(e, c, 1.0, 600, 5);
  REQUIRE(base.value > 0.0);
  // Complement.
  auto comp = nonmonotonicity_total(Region::complement(e), c, 1.0, 600, 5);
  CHECK(comp.value == doctest::Approx(base.value).epsilon(1e-12));
  // Left translation of region and ball.
  Point g{1.5, -0.7, 2.0};
  auto moved = Region::ball(core::multiply(g, Point{0.2, 0.1, 0.0}), 0.4);
  auto tr = nonmonotonicity_total(moved, g, 1.0, 600, 6);
  CHECK(std::abs(tr.value - base.value) <= 3 * std::hypot(tr.std_error, base.std_error));
  // Rotation about the vertical axis.
  auto rot = core::LinearAuto::rotation(0.9);
  auto turned = Region::ball(rot(Point{0.2, 0.1, 0.0}), 0.4);
  auto ro = nonmonotonicity_total(turned, c, 1.0, 600, 7);
  CHECK(std::abs(ro.value - base.value) <= 3 * std::hypot(ro.std_error, base.std_error));
  // Homothety.
  auto scaled = Region::ball({0.4, 0.2, 0.0}, 0.8);
  auto sc = nonmonotonicity_total(scaled, c, 2.0, 600, 8);
  CHECK(std::abs(sc.value - base.value) <= 3 * std::hypot(sc.std_error, base.std_error));
}

TEST_CASE("quantitative boundary classes") {
  auto half = Region::halfspace(HalfSpace({1, 0, 0}, 0.0));
  auto deep = quant_boundary_class(half, {-2, 0, 0}, 0.1, 0.2, 2000, 1);
  CHECK(deep.cls == BoundaryClass::interior_e);
  CHECK(deep.fraction.value == 1.0);
  auto outside = quant_boundary_class(half, {2, 0, 0}, 0.1, 0.2, 2000, 1);
  CHECK(outside.cls == BoundaryClass::interior_complement);
  auto edge = quant_boundary_class(half, {0, 0.3, 0}, 0.1, 0.5, 4000, 2);
  CHECK(edge.cls == BoundaryClass::boundary);
  CHECK(edge.fraction.within_sigmas(0.5, 3.0));
  for (int i = 0; i < 20; ++i) {
    auto r = quant_boundary_class(half, {0.01 * i - 0.1, 0, 0}, 0.6, 0.5, 200, i);
    CHECK(r.cls != BoundaryClass::boundary);
  }
  CHECK_THROWS_AS(quant_boundary_class(half, {}, 1.0, 0.5, 10, 1), Error);
  CHECK_THROWS_AS(quant_boundary_class(half, {}, 0.0, 0.5, 10, 1), Error);
}

TEST_CASE("uniform ball sampling stays in the ball") {
  for (int i = 0; i < 500; ++i) {
    Point p = uniform_in_ball({1, 2, 3}, 0.7, 4, i);
    CHECK(core::cc_distance({1, 2, 3}, p) < 0.7);
  }
}

TEST_CASE("half-space fit") {
  auto h = Region::halfspace(HalfSpace({0.2, -0.5, 1.0}, 0.05));
  auto fit = halfspace_fit(h, {0.1, 0, 0}, 0.5, 4000, 3);
  CHECK(fit.error.value <= 2 * fit.error.std_error + 1e-12);
  auto check = symdiff_fraction(h, fit.plane, {0.1, 0, 0}, 0.5, 4000, 99);
  CHECK(check.value < 0.01);

  auto none = halfspace_fit(Region::empty_set(), core::identity, 1.0, 500, 1);
  CHECK(none.plane.kind() == HalfSpace::Kind::empty);
  CHECK(none.error.value == 0.0);
  auto all = halfspace_fit(Region::full_space(), core::identity, 1.0, 500, 1);
  CHECK(all.plane.kind() == HalfSpace::Kind::full);

  auto bil = halfspace_fit(Region::bilinear(), {0, 1, 0}, 0.9, 20000, 3);
  CHECK(bil.error.value > 3 * bil.error.std_error);
}

TEST_CASE("kinematic perimeter and scale profile") {
  auto none = perimeter_kinematic(Region::empty_set(), core::identity, 1.0, 200, 1);
  CHECK(none.value == 0.0);
  auto all = perimeter_kinematic(Region::full_space(), core::identity, 1.0, 200, 1);
  CHECK(all.value == 0.0);

  auto half = Region::halfspace(HalfSpace({1, 0, 0}, 0.0));
  auto p1 = perimeter_kinematic(half, core::identity, 1.0, 3000, 2);
  CHECK(p1.value > 0.0);
  // Dilation: A_2 of the half-space is itself.
  auto p2 = perimeter_kinematic(half, core::identity, 2.0, 3000, 3);
  double ratio = p2.value / p1.value;
  CHECK(ratio == doctest::Approx(8.0).epsilon(0.05));

  auto prof = scale_profile(half, core::identity, 1.0, 0.5, 3000, 2);
  CHECK(prof.total == doctest::Approx(p1.value).epsilon(1e-12));
  std::int64_t halves = 0;
  for (auto h : prof.half_counts) halves += h;
  CHECK(halves == 2 * prof.endpoints);
  CHECK(prof.mass_sum() == doctest::Approx(prof.total).epsilon(1e-12));
  // Single-crossing traces: the profile is the histogram of the two chord
  // pieces on either side of the analytic crossing a = 0.
  std::vector<std::int64_t> expect(prof.half_counts.size() + 8, 0);
  for (const auto& s : sample_lines(core::identity, 1.0, 3000, 2, LineNormalization::global)) {
    if (std::abs(s.line.u()) < 1e-12) continue;
    double tc = -s.line.base.a / s.line.u();
    for (auto [lo, hi] : ball_pieces(s.line, core::identity, 1.0)) {
      if (tc - lo < 1.0 / 512 || hi - tc < 1.0 / 512) continue;
      ++expect[scale_bucket(tc - lo, 1.0, 0.5)];
      ++expect[scale_bucket(hi - tc, 1.0, 0.5)];
    }
  }
  std::int64_t mismatched = 0, expected_total = 0;
  for (std::size_t j = 0; j < expect.size(); ++j) {
    std::int64_t got = j < prof.half_counts.size() ? prof.half_counts[j] : 0;
    mismatched += std::abs(got - expect[j]);
    expected_total += expect[j];
  }
  // Only pieces within a bisection tolerance of a bucket edge may differ.
  CHECK(mismatched <= expected_total / 500 + 2);

  const double delta = 0.25;
  auto slab = scale_profile(slabs(delta * delta), core::identity, 1.0, delta, 300, 4);
  auto peak = std::max_element(slab.masses.begin(), slab.masses.end()) - slab.masses.begin();
  CHECK(std::abs(peak - 2) <= 1);
  CHECK(slab.mass_sum() == doctest::Approx(slab.total).epsilon(1e-12));
}

TEST_CASE("scale buckets") {
  CHECK(scale_bucket(2.0, 1.0, 0.5) == 0);
  CHECK(scale_bucket(0.5, 1.0, 0.5) == 0);
  CHECK(scale_bucket(0.49, 1.0, 0.5) == 1);
  CHECK(scale_bucket(0.25, 1.0, 0.5) == 1);
  CHECK(scale_bucket(0.2, 1.0, 0.5) == 2);
  CHECK(scale_bucket(0.3, 2.0, 0.5) == 2);
  CHECK(scale_bucket(0.6, 1.0, 0.5) == 0);
}

TEST_CASE("find_good_scale examples") {
  std::vector<double> m{0.5, 0.3, 0.05, 0.15};
  CHECK(find_good_scale(m, 0.1) == 2);
  std::vector<double> z{0, 0, 0};
  CHECK(find_good_scale(z, 0.1) == 0);
  std::vector<double> one{1.0};
  try {
    find_good_scale(one, 0.5);
    FAIL("expected NO_GOOD_SCALE");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::no_good_scale);
  }
}

TEST_CASE("classify_pair") {
  auto l = line_through({0.3, 0.1, 2}, 0.4);
  CHECK(classify_pair(l, l).kind == PairKind::same_projection_parallel);
  CHECK(classify_pair(l, line_through({0.3, 0.1, 5}, 0.4 + pi)).kind == PairKind::same_projection_parallel);
  CHECK(classify_pair(l, translate({0, 1, 0}, l)).kind == PairKind::parallel);
  CHECK(classify_pair(l, line_through(l.at(0.7), 1.3)).kind == PairKind::intersecting);

  double w = 1.0, c = 1.0;
  auto l1 = line_through({0, 0, c}, std::atan(w));
  auto l2 = line_through({0, 0, -c}, -std::atan(w));
  auto inv = classify_pair(l1, l2);
  REQUIRE(inv.kind == PairKind::skew);
  CHECK(inv.w == doctest::Approx(1.0));
  CHECK(inv.c == doctest::Approx(1.0));
  CHECK(inv.vertical_distance == doctest::Approx(std::sqrt(2.0)));
  CHECK(inv.dfrak == doctest::Approx(2.0));
  CHECK(classify_pair(l2, l1).c == doctest::Approx(1.0));

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  int skew = 0;
  for (int i = 0; i < 1000; ++i) {
    auto a = line_through({u(rng), u(rng), u(rng)}, u(rng) * pi);
    auto b = line_through({u(rng), u(rng), u(rng)}, u(rng) * pi);
    auto r = classify_pair(a, b);
    if (r.kind != PairKind::skew) continue;
    ++skew;
    double lhs = 0.5 / std::tan(0.5 * r.theta) * r.dfrak * r.dfrak;
    CHECK(lhs == doctest::Approx(r.vertical_distance * r.vertical_distance).epsilon(1e-9));
    // The normalizing map sends the pair to canonical form.
    auto ca = r.to_canonical.forward(r.swapped ? b : a);
    auto cb = r.to_canonical.forward(r.swapped ? a : b);
    for (double t : {-1.0, 0.5, 2.0}) {
      Point pa = ca.at(t), pb = cb.at(t);
      CHECK(pa.c == doctest::Approx(r.c).epsilon(1e-9));
      CHECK(pa.b == doctest::Approx(r.w * pa.a).epsilon(1e-9));
      CHECK(pb.c == doctest::Approx(-r.c).epsilon(1e-9));
      CHECK(pb.b == doctest::Approx(-r.w * pb.a).epsilon(1e-9));
    }
  }
  CHECK(skew > 900);
}

TEST_CASE("parallel connector") {
  double e = 1.0;
  auto l1 = line_through({0, e, 0}, 0.0);   // (t, e, -e t)
  auto l2 = line_through({0, -e, 0}, 0.0);  // (s, -e, e s)
  auto pc = parallel_connector(l1, l2, {2, 1, -2});
  CHECK(near(pc.x_star, {-2, -1, -2}, 1e-12));
  CHECK(pc.m[0] == doctest::Approx(0.0));
  CHECK(pc.m[1] == doctest::Approx(0.0));
  for (double s : {0.1, 0.3, 0.8}) {
    Point q = pc.connector.at(s * 2 * std::sqrt(8.0));
    CHECK(q.c == doctest::Approx(-e * e * q.a / q.b).epsilon(1e-9));
  }
  CHECK_THROWS_AS(parallel_connector(l1, l1, {0, 1, 0}), Error);

  // General position: map a canonical pair by an isometry.
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 100; ++i) {
    auto a = line_through({u(rng), u(rng), u(rng)}, u(rng) * pi);
    auto b = translate({u(rng), u(rng), u(rng)}, a);
    if (classify_pair(a, b).kind != PairKind::parallel) continue;
    Point x = a.at(u(rng));
    auto c = parallel_connector(a, b, x);
    CHECK(off_line(c.connector, x) < 1e-11);
    // x* lies on the connector and on b.
    CHECK(off_line(c.connector, c.x_star) < 1e-11);
    CHECK(off_line(b, c.x_star) < 1e-11);
  }
}

TEST_CASE("skew envelope lifts") {
  auto l1 = line_through({0, 0, 1}, pi / 4);
  auto l2 = line_through({0, 0, -1}, -pi / 4);
  auto env = skew_envelope(l1, l2);
  CHECK(env.w == doctest::Approx(1.0));
  CHECK(env.hyperbola(1.0, 0.0) == doctest::Approx(0.0));
  CHECK(env.hyperbola(std::cosh(0.7), std::sinh(0.7)) == doctest::Approx(0.0));
  auto b = env.lift(0.0);
  CHECK(near(b.on_l1, {1, 1, 1}, 1e-12));
  CHECK(near(b.on_l2, {1, -1, -1}, 1e-12));
  CHECK_THROWS_AS(skew_envelope(l1, l1), Error);

  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  int tested = 0;
  for (int i = 0; i < 300; ++i) {
    auto a = line_through({u(rng), u(rng), u(rng)}, u(rng) * pi);
    auto c = line_through({u(rng), u(rng), u(rng)}, u(rng) * pi);
    if (classify_pair(a, c).kind != PairKind::skew) continue;
    auto s = skew_envelope(a, c);
    for (double tau : {-1.0, 0.0, 0.8}) {
      for (bool branch : {true, false}) {
        auto lift = s.lift(tau, branch);
        CHECK(s.w * lift.t * lift.s == doctest::Approx(s.c).epsilon(1e-9));
        CHECK(off_line(a, lift.on_l1) < 1e-11);
        CHECK(off_line(c, lift.on_l2) < 1e-11);
        CHECK(off_line(lift.line, lift.on_l1) < 1e-11);
        CHECK(off_line(lift.line, lift.on_l2) < 1e-11);
        auto tp = s.tangency(tau, branch);
        CHECK(s.hyperbola(tp[0], tp[1]) == doctest::Approx(0.0).epsilon(1e-9));
      }
    }
    ++tested;
  }
  CHECK(tested > 200);
}

TEST_CASE("split_by_perimeter") {
  std::vector<CutRecord> one{{1.0, 2.0, 0.5}};
  auto a = split_by_perimeter(one, 1.0);
  CHECK(a.mass_large == 1.0);
  CHECK(a.mass_small == 0.0);
  CHECK(a.dropped_error_bound == 0.0);
  auto b = split_by_perimeter(one, 3.0);
  CHECK(b.mass_small == 1.0);
  CHECK(b.mass_large == 0.0);
  CHECK(b.dropped_error_bound == doctest::Approx(0.5));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<CutRecord> mix;
  for (int i = 0; i < 50; ++i) mix.push_back({u(rng), 3 * u(rng), u(rng)});
  double total = 0.0, large = 0.0;
  for (const auto& c : mix) {
    total += c.weight * c.perimeter;
    if (c.perimeter > 1.2) large += c.weight;
  }
  auto s = split_by_perimeter(mix, 1.2);
  CHECK(s.mass_large == doctest::Approx(large));
  CHECK(s.mass_large <= total / 1.2);
  CHECK_THROWS_AS(split_by_perimeter(mix, 0.0), Error);
}

TEST_CASE("region parsing") {
  using nlohmann::json;
  auto h = Region::from_json(json::parse(R"({"type":"halfspace","normal":[1,0,0],"offset":0,"side":"le"})"));
  CHECK(h.contains({-1, 0, 0}));
  CHECK_FALSE(h.contains({1, 0, 0}));
  auto c = Region::from_json(json::parse(R"({"type":"complement","of":{"type":"bilinear"}})"));
  CHECK(c.contains({0, -1, 0}));
  auto b = Region::from_json(json::parse(R"({"type":"ball","center":[0,0,0],"r":1})"));
  CHECK(b.contains({0, 0, 0.1}));
  CHECK_FALSE(b.contains({0, 0, 0.2}));
  CHECK_THROWS_AS(Region::from_json(json::parse(R"({"type":"ball","center":[0,0,0],"r":1,"x":2})")), Error);
  CHECK_THROWS_AS(Region::from_json(json::parse(R"({"type":"torus"})")), Error);
  CHECK_THROWS_AS(Region::from_json(json::parse(R"({"type":"halfspace","normal":[0,0,0],"offset":0})")), Error);

  auto dir = std::filesystem::temp_directory_path() / "heislab_voxel_test";
  std::filesystem::create_directories(dir);
  {
    // 2x2x2 grid, only cell (1,0,1) set: bit (1*2+0)*2+1 = 5.
    std::ofstream out(dir / "cells.bin", std::ios::binary);
    char byte = 1 << 5;
    out.write(&byte, 1);
  }
  auto v = Region::from_json(
      json::parse(R"({"type":"voxel","origin":[0,0,0],"spacing":0.5,"dims":[2,2,2],"data":"cells.bin"})"), dir);
  CHECK(v.contains({0.7, 0.2, 0.7}));
  CHECK_FALSE(v.contains({0.2, 0.2, 0.7}));
  CHECK_FALSE(v.contains({1.2, 0.2, 0.7}));
  std::filesystem::remove_all(dir);
}

TEST_CASE("unit ball profile and uniform sampling") {
  CHECK(unit_ball_half_height(0.0) == doctest::Approx(0.5 / pi));
  CHECK(unit_ball_half_height(2.0 / pi) == doctest::Approx(core::unit_ball_max_height).epsilon(1e-9));
  for (double rho : {0.1, 0.4, 0.7, 0.95}) {
    CHECK(core::cc_norm({rho, 0.0, unit_ball_half_height(rho)}) == doctest::Approx(1.0).epsilon(1e-9));
  }
  // Acceptance rate of the rejection box matches the column volume.
  ColumnOracle oracle(400);
  const double box = 4.0 * 2.0 * core::unit_ball_max_height;
  std::int64_t hits = 0;
  const int n = 200000;
  CounterRng rng(1, 2);
  for (int i = 0; i < n; ++i) {
    Point p{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1) * core::unit_ball_max_height};
    hits += core::in_cc_ball(core::identity, 1.0, p);
  }
  double f = static_cast<double>(hits) / n, expect = oracle.ball_volume() / box;
  CHECK(std::abs(f - expect) <= 4 * std::sqrt(expect * (1 - expect) / n));
  // Points sampled in B_r(x) fill the top of the ball too.
  double top = 0.0;
  for (int i = 0; i < 5000; ++i) top = std::max(top, uniform_in_unit_ball(6, i).c);
  CHECK(top > 0.25);
}

TEST_CASE("column oracle") {
  ColumnOracle oracle(200);
  // A plane against itself, and a plane against its complement.
  auto flat = [](double a, double) { return 0.3 * a; };
  CHECK(oracle.symdiff(flat, {-0.3, 0.0, 1.0}, 0.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(oracle.symdiff(flat, {0.3, 0.0, -1.0}, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  // Vertical planes: {a <= 0} against the subgraph of a steep plane.
  CHECK(oracle.symdiff([](double, double) { return -INFINITY; }, {1, 0, 0}, 0.0) ==
        doctest::Approx(0.5).epsilon(1e-9));
  // The bilinear subgraph is strictly away from every half-space at r = 0.9,
  // and agrees with the Monte Carlo fit on an independent sample.
  auto g = bilinear_local_graph(0.9);
  auto mc = halfspace_fit(Region::bilinear(), {0, 1, 0}, 0.9, 20000, 3);
  auto best = oracle.minimize(g, mc.frame_normal, mc.frame_offset);
  CHECK(best.symdiff > 5e-3);
  CHECK(mc.holdout.value + 3 * mc.holdout.std_error >= best.symdiff);
  // Small radius: still positive, much smaller.
  auto small = oracle.minimize(bilinear_local_graph(0.1), {-1.0, 0.0, 0.05}, 0.0);
  CHECK(small.symdiff > 0.0);
  CHECK(small.symdiff < 1e-3);
}
