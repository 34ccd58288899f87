#include "heislab/geometry/column_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "heislab/error.hpp"

namespace heislab::geometry {

namespace {

// Length of [lo1, hi1] ∩ [lo2, hi2].
double overlap(double lo1, double hi1, double lo2, double hi2) {
  return std::max(0.0, std::min(hi1, hi2) - std::max(lo1, lo2));
}

core::Vec3 normalized(core::Vec3 v) {
  double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  return {v[0] / n, v[1] / n, v[2] / n};
}

}  // namespace

double unit_ball_half_height(double rho) {
  if (rho >= 1.0) return 0.0;
  if (rho <= 0.0) return 0.5 / std::numbers::pi;
  // rho(φ) = 2 sin(φ/2)/φ decreases from 1 to 0 on [0, 2π].
  double lo = 0.0, hi = 2.0 * std::numbers::pi;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    double mid = 0.5 * (lo + hi);
    double r = mid < 1e-8 ? 1.0 - mid * mid / 24.0 : 2.0 * std::sin(0.5 * mid) / mid;
    (r > rho ? lo : hi) = mid;
  }
  double phi = 0.5 * (lo + hi);
  if (phi < 1e-4) return phi / 6.0 - phi * phi * phi / 120.0;
  return (phi - std::sin(phi)) / (phi * phi);
}

ColumnOracle::ColumnOracle(int n) : n_(n), h_(2.0 / n) {
  if (n < 2) throw Error(ErrorCode::invalid_argument, "column oracle needs n >= 2");
  half_height_.resize(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double a = -1.0 + (i + 0.5) * h_, b = -1.0 + (j + 0.5) * h_;
      double z = unit_ball_half_height(std::hypot(a, b));
      half_height_[static_cast<std::size_t>(i) * n + j] = z;
      volume_ += 2.0 * z * h_ * h_;
    }
  }
}

double ColumnOracle::symdiff(const std::function<double(double, double)>& f,
                             const core::Vec3& normal, double offset) const {
  double total = 0.0;
  for (int i = 0; i < n_; ++i) {
    double a = -1.0 + (i + 0.5) * h_;
    for (int j = 0; j < n_; ++j) {
      double z = half_height_[static_cast<std::size_t>(i) * n_ + j];
      if (z <= 0.0) continue;
      double b = -1.0 + (j + 0.5) * h_;
      double e_hi = std::clamp(f(a, b), -z, z);
      double e_len = e_hi + z;  // fiber of E is [-z, e_hi]
      double p_lo = -z, p_hi = z;
      double rest = offset - normal[0] * a - normal[1] * b;
      if (normal[2] > 0.0) {
        p_hi = std::clamp(rest / normal[2], -z, z);
      } else if (normal[2] < 0.0) {
        p_lo = std::clamp(rest / normal[2], -z, z);
      } else if (rest < 0.0) {
        p_hi = -z;  // column entirely outside the plane
      }
      double p_len = p_hi - p_lo;
      total += e_len + p_len - 2.0 * overlap(-z, e_hi, p_lo, p_hi);
    }
  }
  return total * h_ * h_ / volume_;
}

ColumnOracle::Fit ColumnOracle::minimize(const std::function<double(double, double)>& f,
                                         const core::Vec3& normal, double offset) const {
  Fit best{normalized(normal), offset, 0.0};
  best.symdiff = symdiff(f, best.normal, best.offset);
  for (double step = 0.05; step > 1e-7;) {
    bool improved = false;
    for (int k = 0; k < 4; ++k) {
      for (double sgn : {1.0, -1.0}) {
        Fit trial = best;
        if (k < 3) {
          trial.normal[k] += sgn * step;
          trial.normal = normalized(trial.normal);
        } else {
          trial.offset += sgn * step;
        }
        trial.symdiff = symdiff(f, trial.normal, trial.offset);
        if (trial.symdiff < best.symdiff) {
          best = trial;
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return best;
}

std::function<double(double, double)> bilinear_local_graph(double r, double b) {
  // (0,b,0)·(X,Y,Z) = (X, b+Y, Z - bX); z <= xy  <=>  Z <= 2bX + XY, and
  // X = r ξ_a, Y = r ξ_b, Z = r^2 ξ_c.
  return [r, b](double xa, double xb) { return 2.0 * b * xa / r + xa * xb; };
}

}  // namespace heislab::geometry
