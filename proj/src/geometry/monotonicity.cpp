#include "heislab/geometry/monotonicity.hpp"

#include <algorithm>
#include <vector>

#include "heislab/error.hpp"
#include "heislab/parallel.hpp"

namespace heislab::geometry {

namespace {

// Signed run lengths over the window: + for E, - for the complement.
std::vector<double> signed_runs(const IntervalTrace& trace) {
  // Gaps between pieces are neutral and contribute nothing.
  std::vector<double> runs;
  auto seg = trace.segments.begin();
  for (const auto& p : trace.parts()) {
    double cursor = p.lo;
    for (; seg != trace.segments.end() && seg->lo < p.hi; ++seg) {
      if (seg->lo > cursor) runs.push_back(-(seg->lo - cursor));
      runs.push_back(seg->length());
      cursor = seg->hi;
    }
    if (cursor < p.hi) runs.push_back(-(p.hi - cursor));
  }
  return runs;
}

}  // namespace

double nonconvexity(const IntervalTrace& trace) {
  double best = 0.0, current = 0.0;
  for (double x : signed_runs(trace)) {
    current = std::max(x, current + x);
    best = std::max(best, current);
  }
  return std::max(0.0, trace.mass() - best);
}

double nonconvexity_bruteforce(const IntervalTrace& trace) {
  const auto parts = trace.parts();
  std::vector<double> bounds;
  for (const auto& p : parts) {
    bounds.push_back(p.lo);
    bounds.push_back(p.hi);
  }
  for (const auto& s : trace.segments) {
    bounds.push_back(s.lo);
    bounds.push_back(s.hi);
  }
  std::sort(bounds.begin(), bounds.end());
  const double mass = trace.mass();
  auto overlap = [](const std::vector<Interval>& set, double lo, double hi) {
    double m = 0.0;
    for (const auto& s : set) m += std::max(0.0, std::min(hi, s.hi) - std::max(lo, s.lo));
    return m;
  };
  double best = mass;  // I empty
  for (std::size_t i = 0; i < bounds.size(); ++i) {
    for (std::size_t j = i + 1; j < bounds.size(); ++j) {
      double lo = bounds[i], hi = bounds[j];
      if (!(hi > lo)) continue;
      double in = overlap(trace.segments, lo, hi);
      // ∫|χ_I - χ_E| over L ∩ B = |I \ E| + |E \ I|
      best = std::min(best, (overlap(parts, lo, hi) - in) + (mass - in));
    }
  }
  return best;
}

double nonmonotonicity(const IntervalTrace& trace) {
  return nonconvexity(trace) + nonconvexity(trace.complement());
}

double nonmonotonicity_line(const Region& e, const HorizontalLine& line, const Point& center,
                            double r, double step) {
  return nonmonotonicity(restrict_to_line(e, line, center, r, step));
}

Estimate nonmonotonicity_total(const Region& e, const Point& center, double r,
                               std::int64_t samples, std::uint64_t seed,
                               const LineEstimatorOptions& options) {
  if (samples < 1) throw Error(ErrorCode::invalid_argument, "nonmonotonicity_total needs samples >= 1");
  const double step = options.step > 0.0 ? options.step : r / 512.0;
  auto lines = sample_lines(center, r, samples, seed, options.normalization, options.workers);
  std::vector<double> values(lines.size());
  parallel_for(lines.size(), options.workers, [&](std::size_t i) {
    values[i] = nonmonotonicity_line(e, lines[i].line, center, r, step);
  });
  const double mass = line_measure_mass(r, options.normalization);
  return mean_estimate(values, mass / (r * r * r * r), seed);
}

}  // namespace heislab::geometry
