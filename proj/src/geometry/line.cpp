#include "heislab/geometry/line.hpp"

#include <algorithm>
#include <numbers>

#include "heislab/core/distance.hpp"

namespace heislab::geometry {

namespace {

double wrap_angle(double theta) {
  const double two_pi = 2.0 * std::numbers::pi;
  double t = std::fmod(theta, two_pi);
  if (t < 0.0) t += two_pi;
  if (t >= two_pi) t = 0.0;
  return t;
}

// Golden-section minimum of f on [a, b].
template <typename F>
std::pair<double, double> golden_min(F&& f, double a, double b, double tol) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 200 && b - a > tol; ++it) {
    if (f1 < f2) {
      b = x2, x2 = x1, f2 = f1, x1 = b - g * (b - a), f1 = f(x1);
    } else {
      a = x1, x1 = x2, f1 = f2, x2 = a + g * (b - a), f2 = f(x2);
    }
  }
  double x = 0.5 * (a + b);
  return {x, f(x)};
}

// Minimizes f over [lo, hi] by a uniform scan then golden refinement around
// the best scanned node.
template <typename F>
std::pair<double, double> scan_min(F&& f, double lo, double hi, int nodes, double tol) {
  double best_t = lo, best_f = INFINITY;
  const double h = (hi - lo) / nodes;
  for (int i = 0; i <= nodes; ++i) {
    double t = lo + i * h;
    double v = f(t);
    if (v < best_f) best_f = v, best_t = t;
  }
  auto refined = golden_min(f, std::max(lo, best_t - h), std::min(hi, best_t + h), tol);
  return refined.second < best_f ? refined : std::pair{best_t, best_f};
}

}  // namespace

HorizontalLine line_through(const Point& p, double theta) { return {p, wrap_angle(theta)}; }

HorizontalLine translate(const Point& g, const HorizontalLine& line) {
  return {core::multiply(g, line.base), line.theta};
}

HorizontalLine transform(const core::LinearAuto& k, const HorizontalLine& line) {
  auto d = k.apply(core::Point{line.u(), line.v(), 0.0});
  return {k.apply(line.base), wrap_angle(std::atan2(d.b, d.a))};
}

double distance_to_line(const HorizontalLine& line, const Point& center) {
  const double t0 = line.foot(center);
  const double reach = core::cc_distance(center, line.at(t0));
  if (reach == 0.0) return 0.0;
  auto f = [&](double t) { return core::cc_distance(center, line.at(t)); };
  return scan_min(f, t0 - reach, t0 + reach, 64, 1e-12 * (1.0 + reach)).second;
}

std::vector<std::pair<double, double>> ball_pieces(const HorizontalLine& line, const Point& center,
                                                   double r, double tol) {
  // |t - foot| <= cc(L(t), center), so L ∩ B lies in [t0 - r, t0 + r].
  const double t0 = line.foot(center);
  auto inside = [&](double t) { return core::in_cc_ball(center, r, line.at(t)); };
  auto dist = [&](double t) { return core::cc_distance(center, line.at(t)); };

  constexpr int nodes = 64;
  const double h = 2.0 * r / nodes;
  std::vector<double> ts(nodes + 1);
  std::vector<char> in(nodes + 1);
  for (int i = 0; i <= nodes; ++i) {
    ts[i] = t0 - r + h * i;
    in[i] = inside(ts[i]);
  }
  // Pieces too thin to contain a node show up as local minima below r.
  std::vector<double> d;
  for (int i = 1; i < nodes; ++i) {
    if (in[i] || in[i - 1] || in[i + 1]) continue;
    if (d.empty()) {
      d.resize(nodes + 1, NAN);
    }
    for (int k : {i - 1, i, i + 1}) {
      if (std::isnan(d[k])) d[k] = dist(ts[k]);
    }
    if (d[i] <= d[i - 1] && d[i] <= d[i + 1]) {
      auto [t, v] = golden_min(dist, ts[i - 1], ts[i + 1], 1e-13 * (1.0 + r));
      if (v < r) {
        // Insert the dip as an interior node.
        ts.insert(ts.begin() + i + 1, t);
        in.insert(in.begin() + i + 1, 1);
        d.insert(d.begin() + i + 1, v);
        ++i;
      }
    }
  }
  auto edge = [&](double a, double b) {  // a inside, b outside
    while (std::abs(b - a) > tol) {
      double mid = 0.5 * (a + b);
      if (mid == a || mid == b) break;
      (inside(mid) ? a : b) = mid;
    }
    return a;
  };
  std::vector<std::pair<double, double>> pieces;
  double lo = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    bool prev = i > 0 && in[i - 1];
    if (in[i] && !prev) lo = i == 0 ? ts[0] : edge(ts[i], ts[i - 1]);
    bool next = i + 1 < ts.size() && in[i + 1];
    if (in[i] && !next) pieces.emplace_back(lo, i + 1 < ts.size() ? edge(ts[i], ts[i + 1]) : ts[i]);
  }
  return pieces;
}

bool meets_ball(const HorizontalLine& line, const Point& center, double r) {
  const double t0 = line.foot(center);
  auto dist = [&](double t) { return core::cc_distance(center, line.at(t)); };
  constexpr int nodes = 64;
  const double h = 2.0 * r / nodes;
  std::vector<char> in(nodes + 1);
  for (int i = 0; i <= nodes; ++i) {
    in[i] = core::in_cc_ball(center, r, line.at(t0 - r + h * i));
    if (in[i]) return true;
  }
  // Same dip search as ball_pieces.
  std::vector<double> d(nodes + 1);
  for (int i = 0; i <= nodes; ++i) d[i] = dist(t0 - r + h * i);
  for (int i = 1; i < nodes; ++i) {
    if (d[i] <= d[i - 1] && d[i] <= d[i + 1] &&
        golden_min(dist, t0 - r + h * (i - 1), t0 - r + h * (i + 1), 1e-13 * (1.0 + r)).second < r) {
      return true;
    }
  }
  return false;
}

std::optional<std::pair<double, double>> ball_window(const HorizontalLine& line,
                                                     const Point& center, double r, double tol) {
  auto pieces = ball_pieces(line, center, r, tol);
  if (pieces.empty()) return std::nullopt;
  return std::pair{pieces.front().first, pieces.back().second};
}

}  // namespace heislab::geometry
