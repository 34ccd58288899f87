#include "heislab/core/automorphism.hpp"

#include <cmath>

#include "heislab/core/constants.hpp"
#include "heislab/error.hpp"

namespace heislab::core {

LinearAuto::LinearAuto(double k11, double k12, double k21, double k22)
    : k11_(k11), k12_(k12), k21_(k21), k22_(k22) {
  if (!(std::abs(det()) > Tolerances::det_min)) {
    throw Error(ErrorCode::singular_automorphism, "|det K| must exceed 1e-12");
  }
}

LinearAuto LinearAuto::rotation(double theta) {
  double c = std::cos(theta), s = std::sin(theta);
  return {c, -s, s, c};
}

LinearAuto LinearAuto::inverse() const {
  double d = det();
  return {k22_ / d, -k12_ / d, -k21_ / d, k11_ / d};
}

}  // namespace heislab::core
