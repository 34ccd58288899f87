#include "heislab/geometry/kinematic.hpp"

#include <algorithm>
#include <cmath>

#include "heislab/error.hpp"
#include "heislab/parallel.hpp"

namespace heislab::geometry {

namespace {

std::vector<IntervalTrace> traces_for(const Region& e, const Point& center, double r,
                                      std::int64_t samples, std::uint64_t seed,
                                      const LineEstimatorOptions& options) {
  if (samples < 1) throw Error(ErrorCode::invalid_argument, "estimator needs samples >= 1");
  const double step = options.step > 0.0 ? options.step : r / 512.0;
  auto lines = sample_lines(center, r, samples, seed, options.normalization, options.workers);
  std::vector<IntervalTrace> traces(lines.size());
  parallel_for(lines.size(), options.workers, [&](std::size_t i) {
    traces[i] = restrict_to_line(e, lines[i].line, center, r, step);
  });
  return traces;
}

}  // namespace

namespace {

// Endpoints of s that are not ends of the piece of L ∩ B containing it.
int inner_endpoints(const std::vector<Interval>& parts, const Interval& s) {
  for (const auto& p : parts) {
    if (s.lo >= p.lo && s.hi <= p.hi) return (s.lo > p.lo) + (s.hi < p.hi);
  }
  return 0;
}

}  // namespace

std::int64_t boundary_count(const IntervalTrace& trace) {
  const auto parts = trace.parts();
  std::int64_t n = 0;
  for (const auto& s : trace.segments) n += inner_endpoints(parts, s);
  return n;
}

Estimate perimeter_kinematic(const Region& e, const Point& center, double r, std::int64_t samples,
                             std::uint64_t seed, const LineEstimatorOptions& options) {
  auto traces = traces_for(e, center, r, samples, seed, options);
  std::vector<double> counts(traces.size());
  for (std::size_t i = 0; i < traces.size(); ++i) counts[i] = static_cast<double>(boundary_count(traces[i]));
  return mean_estimate(counts, line_measure_mass(r, options.normalization), seed);
}

int scale_bucket(double length, double r, double delta) {
  double ratio = length / r;
  if (ratio >= 1.0) return 0;
  double x = std::log(ratio) / std::log(delta);
  int j = static_cast<int>(std::ceil(x)) - 1;
  // Guard the boundary against rounding in the logarithms.
  while (j > 0 && ratio >= std::pow(delta, j)) --j;
  while (ratio < std::pow(delta, j + 1)) ++j;
  return std::max(0, j);
}

double ScaleProfile::mass_sum() const {
  double s = 0.0;
  for (double m : masses) s += m;
  return s;
}

ScaleProfile scale_profile_of(std::span<const IntervalTrace> traces, double weight, double r,
                              double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw Error(ErrorCode::invalid_argument, "delta must lie in (0,1)");
  ScaleProfile p;
  p.delta = delta;
  p.r = r;
  p.weight = weight;
  std::vector<std::vector<std::int64_t>> per_line(traces.size());
  std::vector<double> line_counts(traces.size());
  std::size_t buckets = 1;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    auto& h = per_line[i];
    auto add_endpoints = [&](const IntervalTrace& t) {
      const auto parts = t.parts();
      for (const auto& s : t.segments) {
        int inner = inner_endpoints(parts, s);
        if (inner == 0) continue;
        auto j = static_cast<std::size_t>(scale_bucket(s.length(), r, delta));
        if (h.size() <= j) h.resize(j + 1, 0);
        h[j] += inner;
      }
    };
    add_endpoints(traces[i]);
    add_endpoints(traces[i].complement());
    buckets = std::max(buckets, h.size());
    line_counts[i] = static_cast<double>(boundary_count(traces[i]));
    p.endpoints += static_cast<std::int64_t>(line_counts[i]);
  }
  p.half_counts.assign(buckets, 0);
  p.masses.assign(buckets, 0.0);
  p.std_errors.assign(buckets, 0.0);
  const double n = static_cast<double>(traces.size());
  for (std::size_t j = 0; j < buckets; ++j) {
    double sum = 0.0, sumsq = 0.0;
    for (const auto& h : per_line) {
      std::int64_t c = j < h.size() ? h[j] : 0;
      p.half_counts[j] += c;
      double v = 0.5 * static_cast<double>(c);
      sum += v;
      sumsq += v * v;
    }
    p.masses[j] = weight * 0.5 * static_cast<double>(p.half_counts[j]);
    if (n > 1) {
      double mean = sum / n;
      double var = std::max(0.0, (sumsq - n * mean * mean) / (n - 1));
      p.std_errors[j] = weight * n * std::sqrt(var / n);
    }
  }
  p.total = weight * static_cast<double>(p.endpoints);
  p.total_std_error = mean_estimate(line_counts, weight * n, 0).std_error;
  return p;
}

ScaleProfile scale_profile(const Region& e, const Point& center, double r, double delta,
                           std::int64_t samples, std::uint64_t seed,
                           const LineEstimatorOptions& options) {
  if (!(delta > 0.0 && delta < 1.0)) throw Error(ErrorCode::invalid_argument, "delta must lie in (0,1)");
  auto traces = traces_for(e, center, r, samples, seed, options);
  double weight = line_measure_mass(r, options.normalization) / static_cast<double>(samples);
  return scale_profile_of(traces, weight, r, delta);
}

int find_good_scale(std::span<const double> masses, double delta) {
  if (masses.empty()) throw Error(ErrorCode::invalid_argument, "find_good_scale needs a nonempty profile");
  double total = 0.0;
  for (double m : masses) total += m;
  const auto limit = static_cast<std::size_t>(std::ceil(1.0 / delta));
  for (std::size_t j = 0; j < masses.size() && j <= limit; ++j) {
    if (masses[j] <= delta * total) return static_cast<int>(j);
  }
  throw Error(ErrorCode::no_good_scale, "every scale bucket exceeds delta times the total mass");
}

}  // namespace heislab::geometry
