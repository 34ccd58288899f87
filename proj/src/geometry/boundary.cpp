#include "heislab/geometry/boundary.hpp"

#include <numbers>

#include "heislab/core/distance.hpp"
#include "heislab/error.hpp"
#include "heislab/parallel.hpp"
#include "heislab/random.hpp"

namespace heislab::geometry {

Point uniform_in_unit_ball(std::uint64_t seed, std::uint64_t index) {
  CounterRng rng(seed, index);
  const double zmax = core::unit_ball_max_height;
  for (;;) {
    Point p{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-zmax, zmax)};
    if (core::in_cc_ball(core::identity, 1.0, p)) return p;
  }
}

Point uniform_in_ball(const Point& x, double r, std::uint64_t seed, std::uint64_t index) {
  Point q = uniform_in_unit_ball(seed, index);
  return core::multiply(x, Point{r * q.a, r * q.b, r * r * q.c});
}

const char* to_string(BoundaryClass c) {
  switch (c) {
    case BoundaryClass::interior_e: return "INTERIOR_E";
    case BoundaryClass::interior_complement: return "INTERIOR_E_COMPLEMENT";
    case BoundaryClass::boundary: return "BOUNDARY";
  }
  return "?";
}

BoundaryResult quant_boundary_class(const Region& e, const Point& x, double alpha, double u,
                                    std::int64_t samples, std::uint64_t seed, int workers) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) throw Error(ErrorCode::invalid_argument, "alpha must lie in (0,1)");
  if (!(u > 0.0)) throw Error(ErrorCode::invalid_argument, "u must be positive");
  if (samples < 1) throw Error(ErrorCode::invalid_argument, "samples must be >= 1");
  std::vector<double> hits(static_cast<std::size_t>(samples));
  parallel_for(hits.size(), workers, [&](std::size_t i) {
    hits[i] = e.contains(uniform_in_ball(x, u, seed, i)) ? 1.0 : 0.0;
  });
  BoundaryResult out;
  out.fraction = mean_estimate(hits, 1.0, seed);
  const double f = out.fraction.value;
  if (f >= 1.0 - alpha) {
    out.cls = BoundaryClass::interior_e;
  } else if (f <= alpha) {
    out.cls = BoundaryClass::interior_complement;
  } else {
    out.cls = BoundaryClass::boundary;
  }
  return out;
}

}  // namespace heislab::geometry
