#pragma once

#include <array>
#include <utility>

#include "heislab/geometry/line.hpp"

namespace heislab::geometry {

enum class PairKind { same_projection_parallel, parallel, skew, intersecting };

const char* to_string(PairKind k);

/// Left translation followed by a rotation about the vertical axis:
/// p -> R_phi(g^{-1} p). Isometry of the CC metric.
struct NormalizingMap {
  Point g;
  double phi = 0.0;

  Point forward(const Point& p) const;
  Point backward(const Point& p) const;
  HorizontalLine forward(const HorizontalLine& l) const;
  HorizontalLine backward(const HorizontalLine& l) const;
};

struct PairInvariants {
  PairKind kind = PairKind::skew;
  /// Angle between the projected directions, in (0, π) for skew pairs.
  double theta = 0.0;
  /// Canonical skew form L1 = (t, wt, c), L2 = (s, -ws, -c), c > 0.
  double w = 0.0;
  double c = 0.0;
  double vertical_distance = 0.0;  // sqrt(2c)
  double dfrak = 0.0;              // 2 sqrt(cw)
  /// Whether L1 and L2 were exchanged to make c positive.
  bool swapped = false;
  NormalizingMap to_canonical;
};

PairInvariants classify_pair(const HorizontalLine& l1, const HorizontalLine& l2,
                             double tol = 1e-12);

struct ParallelConnector {
  HorizontalLine connector;  // through x, meeting L2
  Point x_star;              // connector ∩ L2
  std::array<double, 2> m;   // projection of the fiber m(L1, L2)
  double e = 0.0;            // canonical half-separation
  NormalizingMap to_canonical;
};

/// Canonical form L1 = (t, e, -et), L2 = (s, -e, es); the connector from
/// x = (t, e, -et) ends at x* = (-t, -e, -et). x is projected onto L1 first.
/// Throws invalid_argument unless the pair is parallel with distinct projections.
ParallelConnector parallel_connector(const HorizontalLine& l1, const HorizontalLine& l2,
                                     const Point& x);

struct SkewLift {
  HorizontalLine line;
  Point on_l1;
  Point on_l2;
  double t = 0.0;  // canonical parameters, w t s = c
  double s = 0.0;
};

struct SkewEnvelope {
  double w = 0.0;
  double c = 0.0;
  PairInvariants invariants;

  /// Canonical hyperbola w^2 u^2 - v^2 = c w.
  double hyperbola(double u, double v) const { return w * w * u * u - v * v - c * w; }
  /// Tangency point (±sqrt(c/w) cosh τ, ±sqrt(cw) sinh τ) in canonical coordinates.
  std::array<double, 2> tangency(double tau, bool positive_branch = true) const;
  /// The horizontal line tangent to the hyperbola at `tangency(tau)` lifted
  /// to meet both lines, in original coordinates.
  SkewLift lift(double tau, bool positive_branch = true) const;
};

/// Throws invalid_argument unless the pair is skew.
SkewEnvelope skew_envelope(const HorizontalLine& l1, const HorizontalLine& l2);

}  // namespace heislab::geometry
