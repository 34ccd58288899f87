#pragma once

#include <array>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "heislab/core/halfspace.hpp"
#include "heislab/core/point.hpp"

namespace heislab::geometry {

using core::Point;

struct Box3 {
  Point lo{-INFINITY, -INFINITY, -INFINITY};
  Point hi{INFINITY, INFINITY, INFINITY};

  bool contains(const Point& p) const {
    return p.a >= lo.a && p.a <= hi.a && p.b >= lo.b && p.b <= hi.b && p.c >= lo.c && p.c <= hi.c;
  }
};

/// Occupancy grid: cell (i,j,k) covers origin + spacing·[i,i+1)×[j,j+1)×[k,k+1).
/// Bits are stored row-major over dims [nx,ny,nz] (k fastest), least
/// significant bit first within each byte.
struct VoxelGrid {
  Point origin;
  double spacing = 1.0;
  std::array<std::int64_t, 3> dims{0, 0, 0};
  std::vector<std::uint8_t> bits;

  bool occupied(const Point& p) const;
  static VoxelGrid load(const Point& origin, double spacing, std::array<std::int64_t, 3> dims,
                        const std::filesystem::path& data);
};

/// A measurable subset of the group, given by a deterministic membership
/// oracle. Regions are immutable and safe to query from several threads.
class Region {
 public:
  enum class Kind { halfspace, bilinear, ball, voxel, complement, unite, custom };

  static Region halfspace(const core::HalfSpace& h);
  /// {(x,y,z) : z <= xy, y > 0}
  static Region bilinear();
  /// Open CC ball.
  static Region ball(const Point& center, double r);
  static Region voxel(VoxelGrid grid);
  static Region complement(const Region& of);
  static Region unite(std::vector<Region> parts);
  static Region custom(std::string name, std::function<bool(const Point&)> indicator,
                       Box3 bbox = {});
  static Region empty_set();
  static Region full_space();

  bool contains(const Point& p) const { return impl_->indicator(p); }
  bool operator()(const Point& p) const { return contains(p); }

  Kind kind() const { return impl_->kind; }
  const std::string& name() const { return impl_->name; }
  const Box3& bbox() const { return impl_->bbox; }
  const nlohmann::json& descriptor() const { return impl_->descriptor; }

  /// Parses the region specification format; relative voxel data paths are
  /// resolved against `base_dir`. Unknown fields and types are rejected.
  static Region from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});

 private:
  struct Impl {
    Kind kind;
    std::string name;
    Box3 bbox;
    nlohmann::json descriptor;
    std::function<bool(const Point&)> indicator;
  };
  explicit Region(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

  std::shared_ptr<const Impl> impl_;
};

}  // namespace heislab::geometry
