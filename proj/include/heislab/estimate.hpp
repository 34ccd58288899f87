#pragma once

#include <cmath>
#include <cstdint>
#include <span>

namespace heislab {

/// Monte Carlo estimate with its standard error and provenance.
struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t samples = 0;
  std::uint64_t seed = 0;

  bool within_sigmas(double target, double k, double abs_slack = 1e-12) const {
    return std::abs(value - target) <= k * std_error + abs_slack;
  }
};

/// Mean of `values` scaled by `scale`, with the standard error of that mean.
inline Estimate mean_estimate(std::span<const double> values, double scale, std::uint64_t seed) {
  Estimate e;
  e.samples = static_cast<std::int64_t>(values.size());
  e.seed = seed;
  if (values.empty()) return e;
  double sum = 0.0;
  for (double v : values) sum += v;
  double mean = sum / values.size();
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  double var = values.size() > 1 ? ss / (values.size() - 1) : 0.0;
  e.value = scale * mean;
  e.std_error = std::abs(scale) * std::sqrt(var / values.size());
  return e;
}

}  // namespace heislab
