#pragma once

#include <cstdint>
#include <vector>

#include "heislab/estimate.hpp"
#include "heislab/geometry/region.hpp"

namespace heislab::geometry {

/// Uniform point of B_1(e), by rejection from [-1,1]^2 x [-1/π, 1/π].
Point uniform_in_unit_ball(std::uint64_t seed, std::uint64_t index);

/// Uniform point of B_r(x): x · δ_r(uniform_in_unit_ball).
Point uniform_in_ball(const Point& x, double r, std::uint64_t seed, std::uint64_t index);

enum class BoundaryClass { interior_e, interior_complement, boundary };

const char* to_string(BoundaryClass c);

struct BoundaryResult {
  BoundaryClass cls = BoundaryClass::boundary;
  Estimate fraction;
};

/// Volume fraction f of E in B_u(x); interior_e when f >= 1 - alpha,
/// interior_complement when f <= alpha, boundary otherwise.
/// Requires 0 < alpha < 1 and u > 0.
BoundaryResult quant_boundary_class(const Region& e, const Point& x, double alpha, double u,
                                    std::int64_t samples, std::uint64_t seed, int workers = 1);

}  // namespace heislab::geometry
