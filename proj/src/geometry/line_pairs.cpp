#include "heislab/geometry/line_pairs.hpp"

#include <cmath>
#include <numbers>

#include "heislab/core/automorphism.hpp"
#include "heislab/error.hpp"

namespace heislab::geometry {

using core::LinearAuto;

const char* to_string(PairKind k) {
  switch (k) {
    case PairKind::same_projection_parallel: return "SAME_PROJECTION_PARALLEL";
    case PairKind::parallel: return "PARALLEL";
    case PairKind::skew: return "SKEW";
    case PairKind::intersecting: return "INTERSECTING";
  }
  return "?";
}

Point NormalizingMap::forward(const Point& p) const {
  return LinearAuto::rotation(phi)(core::multiply(core::inverse(g), p));
}

Point NormalizingMap::backward(const Point& p) const {
  return core::multiply(g, LinearAuto::rotation(-phi)(p));
}

HorizontalLine NormalizingMap::forward(const HorizontalLine& l) const {
  return line_through(forward(l.base), l.theta + phi);
}

HorizontalLine NormalizingMap::backward(const HorizontalLine& l) const {
  return line_through(backward(l.base), l.theta - phi);
}

PairInvariants classify_pair(const HorizontalLine& l1, const HorizontalLine& l2, double tol) {
  PairInvariants out;
  const double u1 = l1.u(), v1 = l1.v(), u2 = l2.u(), v2 = l2.v();
  const double cross = u1 * v2 - v1 * u2;
  const double da = l2.base.a - l1.base.a, db = l2.base.b - l1.base.b;
  const double scale = 1.0 + std::abs(l1.base.a) + std::abs(l1.base.b) + std::abs(l2.base.a) +
                       std::abs(l2.base.b);
  if (std::abs(cross) <= tol) {
    double offset = -da * v1 + db * u1;
    out.kind = std::abs(offset) <= tol * scale ? PairKind::same_projection_parallel : PairKind::parallel;
    return out;
  }
  // Projections meet at base1 + t d1 = base2 + s d2.
  const double t = (da * v2 - db * u2) / cross;
  const double s = (da * v1 - db * u1) / cross;
  const Point p1 = l1.at(t), p2 = l2.at(s);
  const double h1 = p1.c, h2 = p2.c;
  const double pi = std::numbers::pi;
  double delta = std::fmod(l1.theta - l2.theta, pi);
  if (delta < 0.0) delta += pi;
  if (std::abs(h1 - h2) <= tol * (1.0 + std::abs(h1) + std::abs(h2))) {
    out.kind = PairKind::intersecting;
    out.theta = delta;
    return out;
  }
  out.kind = PairKind::skew;
  out.swapped = h1 < h2;
  const HorizontalLine& b = out.swapped ? l1 : l2;
  if (out.swapped) delta = pi - delta;
  out.theta = delta;
  out.c = 0.5 * std::abs(h1 - h2);
  out.w = std::tan(0.5 * delta);
  out.vertical_distance = std::sqrt(2.0 * out.c);
  out.dfrak = 2.0 * std::sqrt(out.c * out.w);
  // After translating the crossing to the origin and rotating by
  // -(β_b + Δ/2), the upper line has direction Δ/2 and b has -Δ/2.
  out.to_canonical = {{p1.a, p1.b, 0.5 * (h1 + h2)}, -(b.theta + 0.5 * delta)};
  return out;
}

ParallelConnector parallel_connector(const HorizontalLine& l1, const HorizontalLine& l2,
                                     const Point& x) {
  auto inv = classify_pair(l1, l2);
  if (inv.kind != PairKind::parallel) {
    throw Error(ErrorCode::invalid_argument, "parallel_connector needs parallel lines with distinct projections");
  }
  // Rotate L1 onto direction (1,0); a line of that direction through (a,b,c)
  // is {(x, b, κ - b x)} with κ = c + a b.
  const double phi = -l1.theta;
  auto rot = LinearAuto::rotation(phi);
  Point q1 = rot(l1.base), q2 = rot(l2.base);
  const double b1 = q1.b, b2 = q2.b;
  const double k1 = q1.c + q1.a * q1.b, k2 = q2.c + q2.a * q2.b;
  // Left translation by h: b -> b + h2, κ -> κ + 2 h1 b + h3 + h1 h2.
  const double h2 = -0.5 * (b1 + b2);
  const double e = 0.5 * (b1 - b2);
  const double h1 = (k2 - k1) / (2.0 * (b1 - b2));
  const double h3 = -k1 - 2.0 * h1 * b1 - h1 * h2;
  // canonical = h · R(p) = R(R^{-1}(h) · p), i.e. R_φ(g^{-1} p) with g = R^{-1}(h)^{-1}.
  Point h{h1, h2, h3};
  Point g = core::inverse(LinearAuto::rotation(-phi)(h));
  ParallelConnector out;
  out.e = e;
  out.to_canonical = {g, phi};
  const double t = out.to_canonical.forward(x).a;
  Point xc{t, e, -e * t};
  Point xs{-t, -e, -e * t};
  out.connector = out.to_canonical.backward(line_through(xc, std::atan2(-2.0 * e, -2.0 * t)));
  out.x_star = out.to_canonical.backward(xs);
  Point m = out.to_canonical.backward(Point{0.0, 0.0, 0.0});
  out.m = {m.a, m.b};
  return out;
}

std::array<double, 2> SkewEnvelope::tangency(double tau, bool positive_branch) const {
  double sgn = positive_branch ? 1.0 : -1.0;
  return {sgn * std::sqrt(c / w) * std::cosh(tau), sgn * std::sqrt(c * w) * std::sinh(tau)};
}

SkewLift SkewEnvelope::lift(double tau, bool positive_branch) const {
  const double sgn = positive_branch ? 1.0 : -1.0;
  const double k = std::sqrt(c / w);
  SkewLift out;
  out.t = sgn * k * std::exp(tau);
  out.s = sgn * k * std::exp(-tau);
  Point p1{out.t, w * out.t, c};
  Point p2{out.s, -w * out.s, -c};
  const auto& map = invariants.to_canonical;
  out.line = map.backward(line_through(p1, std::atan2(p2.b - p1.b, p2.a - p1.a)));
  Point a = map.backward(p1), b = map.backward(p2);
  out.on_l1 = invariants.swapped ? b : a;
  out.on_l2 = invariants.swapped ? a : b;
  return out;
}

SkewEnvelope skew_envelope(const HorizontalLine& l1, const HorizontalLine& l2) {
  auto inv = classify_pair(l1, l2);
  if (inv.kind != PairKind::skew) throw Error(ErrorCode::invalid_argument, "skew_envelope needs a skew pair");
  return {inv.w, inv.c, inv};
}

}  // namespace heislab::geometry
