#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <ostream>

namespace heislab::core {

/// A point of the Heisenberg group, modelled on R^3 with
/// (a,b,c)·(a',b',c') = (a+a', b+b', c+c'+ab'-ba').
struct Point {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  friend bool operator==(const Point&, const Point&) = default;

  bool finite() const { return std::isfinite(a) && std::isfinite(b) && std::isfinite(c); }
};

/// Element of the discrete Heisenberg group H(Z).
struct GridPoint {
  std::int64_t a = 0;
  std::int64_t b = 0;
  std::int64_t c = 0;

  friend bool operator==(const GridPoint&, const GridPoint&) = default;
  friend auto operator<=>(const GridPoint&, const GridPoint&) = default;

  Point to_point() const {
    return {static_cast<double>(a), static_cast<double>(b), static_cast<double>(c)};
  }
};

inline constexpr Point identity{};

inline Point multiply(const Point& p, const Point& q) {
  return {p.a + q.a, p.b + q.b, p.c + q.c + p.a * q.b - p.b * q.a};
}

inline Point inverse(const Point& p) { return {-p.a, -p.b, -p.c}; }

inline GridPoint multiply(const GridPoint& p, const GridPoint& q) {
  return {p.a + q.a, p.b + q.b, p.c + q.c + p.a * q.b - p.b * q.a};
}

inline GridPoint inverse(const GridPoint& p) { return {-p.a, -p.b, -p.c}; }

inline Point operator*(const Point& p, const Point& q) { return multiply(p, q); }
inline GridPoint operator*(const GridPoint& p, const GridPoint& q) { return multiply(p, q); }

/// Coordinatewise sup-norm distance, used for numerical comparisons only.
inline double coord_linf(const Point& p, const Point& q) {
  return std::max({std::abs(p.a - q.a), std::abs(p.b - q.b), std::abs(p.c - q.c)});
}

std::ostream& operator<<(std::ostream& os, const Point& p);
std::ostream& operator<<(std::ostream& os, const GridPoint& p);

struct GridPointHash {
  std::size_t operator()(const GridPoint& g) const noexcept {
    // Pack 21 bits per coordinate, then mix.
    auto pack = [](std::int64_t v) { return static_cast<std::uint64_t>(v) & 0x1FFFFFull; };
    std::uint64_t h = pack(g.a) | (pack(g.b) << 21) | (pack(g.c) << 42);
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdull;
    h ^= h >> 33;
    return static_cast<std::size_t>(h);
  }
};

}  // namespace heislab::core
