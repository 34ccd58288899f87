#include "heislab/geometry/halfspace_fit.hpp"

#include <algorithm>
#include <numbers>
#include <numeric>
#include <vector>

#include "heislab/error.hpp"
#include "heislab/geometry/boundary.hpp"
#include "heislab/parallel.hpp"

namespace heislab::geometry {

namespace {

using core::Vec3;

struct Sample {
  Point xi;  // normalized frame: δ_{1/r}(center^{-1} p)
  bool in;
};

struct Candidate {
  Vec3 n{0, 0, 1};
  double offset = 0.0;
  std::int64_t errors = 0;
};

Vec3 unit(Vec3 v) {
  double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  return {v[0] / n, v[1] / n, v[2] / n};
}

// Best threshold for {n·ξ <= o} by a sweep over the sorted projections.
Candidate best_threshold(const std::vector<Sample>& pts, std::int64_t inside, const Vec3& n) {
  std::vector<std::pair<double, bool>> s(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& p = pts[i].xi;
    s[i] = {n[0] * p.a + n[1] * p.b + n[2] * p.c, pts[i].in};
  }
  std::sort(s.begin(), s.end());
  Candidate best{n, s.front().first - 1.0, inside};
  std::int64_t errors = inside;
  for (std::size_t k = 0; k < s.size(); ++k) {
    errors += s[k].second ? -1 : 1;
    if (k + 1 < s.size() && s[k + 1].first == s[k].first) continue;
    if (errors < best.errors) {
      double next = k + 1 < s.size() ? s[k + 1].first : s[k].first + 1.0;
      best = {n, 0.5 * (s[k].first + next), errors};
    }
  }
  return best;
}

std::vector<Vec3> fibonacci_sphere(int count) {
  std::vector<Vec3> dirs;
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < count; ++i) {
    double z = 1.0 - 2.0 * (i + 0.5) / count;
    double rad = std::sqrt(1.0 - z * z);
    dirs.push_back({rad * std::cos(golden * i), rad * std::sin(golden * i), z});
  }
  return dirs;
}

// Half-space {N·p <= O} in original coordinates from {n·ξ <= o}.
core::HalfSpace map_back(const Candidate& c, const Point& center, double r) {
  const auto& n = c.n;
  const double ca = center.a, cb = center.b, cc = center.c;
  Vec3 normal{n[0] / r + n[2] * cb / (r * r), n[1] / r - n[2] * ca / (r * r), n[2] / (r * r)};
  double offset = c.offset + n[0] * ca / r + n[1] * cb / r + n[2] * cc / (r * r);
  return core::HalfSpace(normal, offset);
}

Estimate fraction_estimate(std::int64_t errors, std::int64_t total, std::uint64_t seed) {
  Estimate e;
  double p = static_cast<double>(errors) / static_cast<double>(total);
  e.value = p;
  e.std_error = std::sqrt(p * (1.0 - p) / static_cast<double>(total));
  e.samples = total;
  e.seed = seed;
  return e;
}

}  // namespace

HalfSpaceFit halfspace_fit(const Region& e, const Point& center, double r, std::int64_t budget,
                           std::uint64_t seed, int workers) {
  if (budget < 1) throw Error(ErrorCode::invalid_argument, "halfspace_fit needs budget >= 1");
  if (!(r > 0.0)) throw Error(ErrorCode::invalid_argument, "halfspace_fit needs r > 0");
  std::vector<Sample> pts(static_cast<std::size_t>(budget));
  parallel_for(pts.size(), workers, [&](std::size_t i) {
    Point xi = uniform_in_unit_ball(seed, i);
    Point p = core::multiply(center, Point{r * xi.a, r * xi.b, r * r * xi.c});
    pts[i] = {xi, e.contains(p)};
  });
  std::int64_t inside = 0;
  for (const auto& s : pts) inside += s.in;

  HalfSpaceFit fit;
  std::int64_t best_errors = inside;
  fit.plane = core::HalfSpace::empty();
  if (budget - inside < best_errors) {
    best_errors = budget - inside;
    fit.plane = core::HalfSpace::full();
  }
  if (best_errors > 0) {
    auto dirs = fibonacci_sphere(400);
    std::vector<Candidate> scored(dirs.size());
    parallel_for(dirs.size(), workers,
                 [&](std::size_t i) { scored[i] = best_threshold(pts, inside, dirs[i]); });
    // Pattern search from the few best grid directions.
    std::vector<std::size_t> order(scored.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scored[a].errors < scored[b].errors; });
    const std::size_t starts = std::min<std::size_t>(4, order.size());
    std::vector<Candidate> refined(starts);
    parallel_for(starts, workers, [&](std::size_t k) {
      Candidate cur = scored[order[k]];
      for (double step = 0.1; step > 1e-4;) {
        Vec3 n = cur.n;
        Vec3 t1 = std::abs(n[2]) < 0.9 ? Vec3{-n[1], n[0], 0.0} : Vec3{0.0, -n[2], n[1]};
        t1 = unit(t1);
        Vec3 t2{n[1] * t1[2] - n[2] * t1[1], n[2] * t1[0] - n[0] * t1[2], n[0] * t1[1] - n[1] * t1[0]};
        bool improved = false;
        for (auto [da, db] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, -1}, {1, -1}, {-1, 1}}) {
          Vec3 m = unit({n[0] + step * (da * t1[0] + db * t2[0]), n[1] + step * (da * t1[1] + db * t2[1]),
                         n[2] + step * (da * t1[2] + db * t2[2])});
          Candidate c = best_threshold(pts, inside, m);
          if (c.errors < cur.errors) {
            cur = c;
            improved = true;
          }
        }
        if (!improved) step *= 0.5;
      }
      refined[k] = cur;
    });
    for (const auto& c : refined) {
      if (c.errors < best_errors) {
        best_errors = c.errors;
        fit.plane = map_back(c, center, r);
        fit.frame_normal = c.n;
        fit.frame_offset = c.offset;
      }
    }
  }
  fit.error = fraction_estimate(best_errors, budget, seed);
  fit.holdout = symdiff_fraction(e, fit.plane, center, r, budget, seed ^ 0x5bf03635f0b5e7a1ull, workers);
  return fit;
}

Estimate symdiff_fraction(const Region& e, const core::HalfSpace& plane, const Point& center,
                          double r, std::int64_t budget, std::uint64_t seed, int workers) {
  if (budget < 1) throw Error(ErrorCode::invalid_argument, "symdiff_fraction needs budget >= 1");
  std::vector<std::uint8_t> miss(static_cast<std::size_t>(budget));
  parallel_for(miss.size(), workers, [&](std::size_t i) {
    Point p = uniform_in_ball(center, r, seed, i);
    miss[i] = e.contains(p) != plane.contains(p);
  });
  std::int64_t errors = std::accumulate(miss.begin(), miss.end(), std::int64_t{0});
  return fraction_estimate(errors, budget, seed);
}

}  // namespace heislab::geometry
