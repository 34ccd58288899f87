#pragma once

#include <array>

#include "heislab/core/point.hpp"

namespace heislab::core {

using Vec3 = std::array<double, 3>;

/// Affine plane H_g = {(u, v, c + a v - b u)} through g = (a,b,c); the left
/// translate by g of the horizontal plane at the identity.
struct HorizontalPlane {
  Point g;

  double height(double u, double v) const { return g.c + g.a * v - g.b * u; }
  bool contains(const Point& p, double tol = 1e-12) const {
    return std::abs(p.c - height(p.a, p.b)) <= tol * (1.0 + std::abs(p.c));
  }
  /// Unit normal n and offset o with H_g = {p : n·p = o}.
  Vec3 normal() const;
  double offset() const;
};

HorizontalPlane horizontal_plane(const Point& g);

/// Closed half-space {p : n·p <= o} (side le) or {p : n·p >= o} (side ge),
/// plus the EMPTY and FULL sentinels.
class HalfSpace {
 public:
  enum class Kind { plane, empty, full };
  enum class Side { le, ge };
  enum class Tag { vertical, horizontal, sentinel };

  /// Normal is normalized; throws on a zero or non-finite normal.
  HalfSpace(Vec3 normal, double offset, Side side = Side::le);

  static HalfSpace empty() { return HalfSpace(Kind::empty); }
  static HalfSpace full() { return HalfSpace(Kind::full); }

  Kind kind() const { return kind_; }
  const Vec3& normal() const { return normal_; }
  double offset() const { return offset_; }
  Side side() const { return side_; }

  /// Planes with zero vertical normal component are vertical; every other
  /// plane is H_g for a unique g (see `horizontal_point`).
  Tag tag() const;
  /// The g with plane == H_g; only meaningful for horizontal tags.
  Point horizontal_point() const;

  bool contains(const Point& p) const {
    switch (kind_) {
      case Kind::empty: return false;
      case Kind::full: return true;
      case Kind::plane: break;
    }
    double s = normal_[0] * p.a + normal_[1] * p.b + normal_[2] * p.c;
    return side_ == Side::le ? s <= offset_ : s >= offset_;
  }

  /// Same plane, opposite side.
  HalfSpace flipped() const;

 private:
  explicit HalfSpace(Kind k) : kind_(k) {}

  Kind kind_ = Kind::plane;
  Vec3 normal_{0.0, 0.0, 1.0};
  double offset_ = 0.0;
  Side side_ = Side::le;
};

}  // namespace heislab::core
