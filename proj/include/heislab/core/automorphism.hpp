#pragma once

#include "heislab/core/point.hpp"

namespace heislab::core {

/// Linear automorphism A_K(a,b,c) = (K(a,b), det(K)·c) for an invertible 2x2 K.
class LinearAuto {
 public:
  /// Throws Error(singular_automorphism) when |det K| <= 1e-12.
  LinearAuto(double k11, double k12, double k21, double k22);

  static LinearAuto identity() { return {1.0, 0.0, 0.0, 1.0}; }
  /// Rotation O_theta; an isometry of the CC metric.
  static LinearAuto rotation(double theta);
  /// Homothety (Ra, Rb, R^2 c); scales the CC metric by |R|.
  static LinearAuto dilation(double r) { return {r, 0.0, 0.0, r}; }

  double det() const { return k11_ * k22_ - k12_ * k21_; }
  LinearAuto inverse() const;

  Point apply(const Point& p) const {
    return {k11_ * p.a + k12_ * p.b, k21_ * p.a + k22_ * p.b, det() * p.c};
  }
  Point operator()(const Point& p) const { return apply(p); }

  double k11() const { return k11_; }
  double k12() const { return k12_; }
  double k21() const { return k21_; }
  double k22() const { return k22_; }

 private:
  double k11_, k12_, k21_, k22_;
};

inline Point apply_automorphism(const LinearAuto& k, const Point& p) { return k.apply(p); }

}  // namespace heislab::core
