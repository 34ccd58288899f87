#include "heislab/core/distance.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <numbers>

#include "heislab/core/constants.hpp"

namespace heislab::core {

namespace {

// (phi - sin phi) / (2 (1 - cos phi)); odd, increasing from -inf to inf on (-2π, 2π).
double height_ratio(double phi) {
  if (std::abs(phi) < 1e-4) {
    // Series: phi/6 + phi^3/180.
    return phi / 6.0 + phi * phi * phi / 180.0;
  }
  double half = 0.5 * phi;
  double s = std::sin(half);
  return (phi - std::sin(phi)) / (4.0 * s * s);
}

// Arc length for chord l and turning angle phi: l (phi/2) / sin(phi/2).
double arc_length(double chord, double phi) {
  double half = 0.5 * std::abs(phi);
  if (half < 1e-8) return chord * (1.0 + half * half / 6.0);
  return chord * half / std::sin(half);
}

}  // namespace

double cc_norm(const Point& p) {
  const double chord = std::hypot(p.a, p.b);
  const double z = std::abs(p.c);  // the metric is symmetric under z -> -z
  if (z < Tolerances::flat_height) return chord;
  if (chord == 0.0) return std::sqrt(2.0 * std::numbers::pi * z);

  const double target = z / (chord * chord);
  const double two_pi = 2.0 * std::numbers::pi;
  double lo = 0.0, hi = two_pi;
  while (hi - lo > Tolerances::arc_bracket) {
    double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (height_ratio(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double phi = 0.5 * (lo + hi);
  // Near a full circle the chord formula loses precision; use the radius
  // recovered from the height instead.
  if (phi > 1.0) {
    double denom = phi - std::sin(phi);
    return phi * std::sqrt(z / denom);
  }
  return arc_length(chord, phi);
}

double cc_distance(const Point& p, const Point& q) { return cc_norm(multiply(inverse(p), q)); }

double box_quasidistance(const Point& p, const Point& q) {
  double da = p.a - q.a, db = p.b - q.b;
  double vertical = p.c - q.c + p.a * q.b - p.b * q.a;
  return std::hypot(da, db) + std::sqrt(std::abs(vertical));
}

double rho_distance(const Point& p, const Point& q) {
  const double x = p.a, y = p.b, z = p.c;
  const double t = q.a, u = q.b, v = q.c;
  double h2 = (t - x) * (t - x) + (u - y) * (u - y);
  double vert = v - z + 2.0 * x * u - 2.0 * y * t;
  return std::sqrt(std::sqrt(h2 * h2 + vert * vert) + h2);
}

namespace {

template <typename Ratio>
ComparisonConstants scan_ratio(Ratio ratio, int grid) {
  ComparisonConstants out;
  out.lo = INFINITY;
  out.hi = -INFINITY;
  int i_lo = 0, i_hi = 0;
  for (int i = 0; i <= grid; ++i) {
    double s = static_cast<double>(i) / grid;
    double f = ratio(s);
    if (f < out.lo) out.lo = f, i_lo = i;
    if (f > out.hi) out.hi = f, i_hi = i;
  }
  auto refine = [&](int i, double sign) {
    double a = std::max(0, i - 1) / static_cast<double>(grid);
    double b = std::min(grid, i + 1) / static_cast<double>(grid);
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    double f1 = sign * ratio(x1), f2 = sign * ratio(x2);
    for (int it = 0; it < 80 && b - a > 1e-14; ++it) {
      if (f1 < f2) {
        b = x2, x2 = x1, f2 = f1, x1 = b - g * (b - a), f1 = sign * ratio(x1);
      } else {
        a = x1, x1 = x2, f1 = f2, x2 = a + g * (b - a), f2 = sign * ratio(x2);
      }
    }
    double s = 0.5 * (a + b);
    return std::pair{s, ratio(s)};
  };
  auto [s_lo, lo] = refine(i_lo, 1.0);
  auto [s_hi, hi] = refine(i_hi, -1.0);
  out.s_lo = lo < out.lo ? s_lo : static_cast<double>(i_lo) / grid;
  out.s_hi = hi > out.hi ? s_hi : static_cast<double>(i_hi) / grid;
  out.lo = std::min(out.lo, lo);
  out.hi = std::max(out.hi, hi);
  return out;
}

struct BallPrefilter {
  double lo;
  double hi;
};

const BallPrefilter& ball_prefilter() {
  static const BallPrefilter f = [] {
    auto c = box_ball_constants(1024);
    // Widen the scanned constants; the prefilter must never change an answer.
    return BallPrefilter{c.lo * (1.0 - 1e-3), c.hi * (1.0 + 1e-3)};
  }();
  return f;
}

}  // namespace

ComparisonConstants box_ball_constants(int grid) {
  return scan_ratio([](double s) { return cc_norm({1.0 - s, 0.0, s * s}); }, grid);
}

ComparisonConstants rho_cc_constants(int grid) {
  return scan_ratio(
      [](double s) {
        Point p{1.0 - s, 0.0, s * s};
        return rho_distance(identity, to_rho_model(p)) / cc_norm(p);
      },
      grid);
}

bool in_cc_ball(const Point& center, double r, const Point& p) {
  const auto& f = ball_prefilter();
  double box = box_quasidistance(center, p);
  if (box * f.hi < r) return true;
  if (box * f.lo >= r) return false;
  return cc_distance(center, p) < r;
}

}  // namespace heislab::core
