#include "heislab/geometry/line_sampling.hpp"

#include <numbers>

#include "heislab/core/distance.hpp"
#include "heislab/error.hpp"
#include "heislab/parallel.hpp"
#include "heislab/random.hpp"

namespace heislab::geometry {

HorizontalLine sample_line(const Point& center, double r, std::uint64_t seed, std::uint64_t index) {
  CounterRng rng(seed, index);
  const double two_pi = 2.0 * std::numbers::pi;
  // A line meeting B_r(e) crosses the orthogonal vertical plane at signed
  // offset sigma with |sigma| < r and height z with |z| < r^2 (1 + 1/π).
  const double zmax = r * r * (1.0 + core::unit_ball_max_height);
  for (;;) {
    double theta = rng.uniform(0.0, two_pi);
    double sigma = rng.uniform(-r, r);
    double z = rng.uniform(-zmax, zmax);
    double u = std::cos(theta), v = std::sin(theta);
    // Through (-sigma v, sigma u, z): (-sigma v + t u, sigma u + t v, z - sigma t).
    HorizontalLine local{{-sigma * v, sigma * u, z}, theta};
    if (meets_ball(local, core::identity, r)) return translate(center, local);
  }
}

double line_measure_mass(double r, LineNormalization norm) {
  return norm == LineNormalization::global ? r * r * r : 1.0;
}

std::vector<LineSample> sample_lines(const Point& center, double r, std::int64_t count,
                                     std::uint64_t seed, LineNormalization norm, int workers) {
  if (count < 1) throw Error(ErrorCode::invalid_argument, "sample_lines needs count >= 1");
  if (!(r > 0.0)) throw Error(ErrorCode::invalid_argument, "sample_lines needs r > 0");
  std::vector<LineSample> out(static_cast<std::size_t>(count));
  const double w = line_measure_mass(r, norm) / static_cast<double>(count);
  parallel_for(out.size(), workers, [&](std::size_t i) {
    out[i] = {sample_line(center, r, seed, i), w};
  });
  return out;
}

}  // namespace heislab::geometry
