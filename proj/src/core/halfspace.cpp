#include "heislab/core/halfspace.hpp"

#include <cmath>

#include "heislab/core/constants.hpp"
#include "heislab/error.hpp"

namespace heislab::core {

Vec3 HorizontalPlane::normal() const {
  // z - a v + b u = c  =>  (b, -a, 1)·p = c
  double n = std::sqrt(g.b * g.b + g.a * g.a + 1.0);
  return {g.b / n, -g.a / n, 1.0 / n};
}

double HorizontalPlane::offset() const {
  return g.c / std::sqrt(g.b * g.b + g.a * g.a + 1.0);
}

HorizontalPlane horizontal_plane(const Point& g) { return HorizontalPlane{g}; }

HalfSpace::HalfSpace(Vec3 normal, double offset, Side side) : side_(side) {
  double n = std::sqrt(normal[0] * normal[0] + normal[1] * normal[1] + normal[2] * normal[2]);
  if (!(n > 0.0) || !std::isfinite(n) || !std::isfinite(offset)) {
    throw Error(ErrorCode::invalid_argument, "half-space needs a finite nonzero normal");
  }
  normal_ = {normal[0] / n, normal[1] / n, normal[2] / n};
  offset_ = offset / n;
}

HalfSpace::Tag HalfSpace::tag() const {
  if (kind_ != Kind::plane) return Tag::sentinel;
  return std::abs(normal_[2]) <= Tolerances::vertical_normal ? Tag::vertical : Tag::horizontal;
}

Point HalfSpace::horizontal_point() const {
  // n·p = o with n_z != 0  <=>  z = o/n_z - (n_x/n_z) u - (n_y/n_z) v,
  // matched against z = c - b u + a v.
  double nz = normal_[2];
  return {-normal_[1] / nz, normal_[0] / nz, offset_ / nz};
}

HalfSpace HalfSpace::flipped() const {
  switch (kind_) {
    case Kind::empty: return full();
    case Kind::full: return empty();
    case Kind::plane: break;
  }
  return HalfSpace(normal_, offset_, side_ == Side::le ? Side::ge : Side::le);
}

}  // namespace heislab::core
