#include "heislab/geometry/region.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>

#include "heislab/core/distance.hpp"
#include "heislab/core/json_io.hpp"
#include "heislab/error.hpp"

namespace heislab::geometry {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed) {
  if (!j.is_object()) throw Error(ErrorCode::schema_violation, "region must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.contains(key)) {
      throw Error(ErrorCode::schema_violation, "unknown region field '" + key + "'");
    }
  }
}

const json& require(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw Error(ErrorCode::schema_violation, std::string("missing field '") + key + "'");
  return *it;
}

double require_number(const json& j, const char* key) {
  const json& v = require(j, key);
  if (!v.is_number() || !std::isfinite(v.get<double>())) {
    throw Error(ErrorCode::schema_violation, std::string("field '") + key + "' must be a finite number");
  }
  return v.get<double>();
}

Point require_point(const json& j, const char* key) {
  try {
    return require(j, key).get<Point>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::schema_violation, std::string("field '") + key + "': " + e.what());
  }
}

Box3 unite_boxes(const Box3& x, const Box3& y) {
  return {{std::min(x.lo.a, y.lo.a), std::min(x.lo.b, y.lo.b), std::min(x.lo.c, y.lo.c)},
          {std::max(x.hi.a, y.hi.a), std::max(x.hi.b, y.hi.b), std::max(x.hi.c, y.hi.c)}};
}

}  // namespace

bool VoxelGrid::occupied(const Point& p) const {
  double fi = std::floor((p.a - origin.a) / spacing);
  double fj = std::floor((p.b - origin.b) / spacing);
  double fk = std::floor((p.c - origin.c) / spacing);
  if (fi < 0 || fj < 0 || fk < 0 || fi >= dims[0] || fj >= dims[1] || fk >= dims[2]) return false;
  auto i = static_cast<std::int64_t>(fi), jj = static_cast<std::int64_t>(fj),
       k = static_cast<std::int64_t>(fk);
  std::int64_t bit = (i * dims[1] + jj) * dims[2] + k;
  return (bits[static_cast<std::size_t>(bit >> 3)] >> (bit & 7)) & 1u;
}

VoxelGrid VoxelGrid::load(const Point& origin, double spacing, std::array<std::int64_t, 3> dims,
                          const std::filesystem::path& data) {
  if (!(spacing > 0.0) || dims[0] <= 0 || dims[1] <= 0 || dims[2] <= 0) {
    throw Error(ErrorCode::schema_violation, "voxel grid needs positive spacing and dims");
  }
  std::int64_t cells = dims[0] * dims[1] * dims[2];
  std::size_t bytes = static_cast<std::size_t>((cells + 7) / 8);
  std::ifstream in(data, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open voxel data " + data.string());
  VoxelGrid g{origin, spacing, dims, std::vector<std::uint8_t>(bytes)};
  in.read(reinterpret_cast<char*>(g.bits.data()), static_cast<std::streamsize>(bytes));
  if (static_cast<std::size_t>(in.gcount()) != bytes) {
    throw Error(ErrorCode::schema_violation, "voxel data shorter than dims require: " + data.string());
  }
  return g;
}

Region Region::halfspace(const core::HalfSpace& h) {
  json d = {{"type", "halfspace"}};
  if (h.kind() == core::HalfSpace::Kind::plane) {
    d["normal"] = h.normal();
    d["offset"] = h.offset();
    d["side"] = h.side() == core::HalfSpace::Side::le ? "le" : "ge";
  } else {
    d["sentinel"] = h.kind() == core::HalfSpace::Kind::empty ? "empty" : "full";
  }
  return Region(std::make_shared<const Impl>(
      Impl{Kind::halfspace, "halfspace", Box3{}, d, [h](const Point& p) { return h.contains(p); }}));
}

Region Region::bilinear() {
  Box3 box;
  box.lo.b = 0.0;
  return Region(std::make_shared<const Impl>(
      Impl{Kind::bilinear, "bilinear", box, json{{"type", "bilinear"}},
           [](const Point& p) { return p.b > 0.0 && p.c <= p.a * p.b; }}));
}

Region Region::ball(const Point& center, double r) {
  if (!(r > 0.0) || !center.finite()) throw Error(ErrorCode::invalid_argument, "ball needs r > 0");
  double dz = r * r * core::unit_ball_max_height + (std::abs(center.a) + std::abs(center.b)) * r;
  Box3 box{{center.a - r, center.b - r, center.c - dz}, {center.a + r, center.b + r, center.c + dz}};
  json d = {{"type", "ball"}, {"center", center}, {"r", r}};
  return Region(std::make_shared<const Impl>(Impl{
      Kind::ball, "ball", box, d, [center, r](const Point& p) { return core::in_cc_ball(center, r, p); }}));
}

Region Region::voxel(VoxelGrid grid) {
  Box3 box{grid.origin,
           {grid.origin.a + grid.spacing * grid.dims[0], grid.origin.b + grid.spacing * grid.dims[1],
            grid.origin.c + grid.spacing * grid.dims[2]}};
  json d = {{"type", "voxel"}, {"origin", grid.origin}, {"spacing", grid.spacing}, {"dims", grid.dims}};
  auto g = std::make_shared<const VoxelGrid>(std::move(grid));
  return Region(std::make_shared<const Impl>(
      Impl{Kind::voxel, "voxel", box, d, [g](const Point& p) { return g->occupied(p); }}));
}

Region Region::complement(const Region& of) {
  auto inner = of.impl_;
  return Region(std::make_shared<const Impl>(
      Impl{Kind::complement, "complement(" + inner->name + ")", Box3{},
           json{{"type", "complement"}, {"of", inner->descriptor}},
           [inner](const Point& p) { return !inner->indicator(p); }}));
}

Region Region::unite(std::vector<Region> parts) {
  if (parts.empty()) return empty_set();
  Box3 box = parts.front().bbox();
  json of = json::array();
  for (const auto& r : parts) {
    box = unite_boxes(box, r.bbox());
    of.push_back(r.descriptor());
  }
  return Region(std::make_shared<const Impl>(
      Impl{Kind::unite, "union", box, json{{"type", "union"}, {"of", of}},
           [parts = std::move(parts)](const Point& p) {
             for (const auto& r : parts) {
               if (r.contains(p)) return true;
             }
             return false;
           }}));
}

Region Region::custom(std::string name, std::function<bool(const Point&)> indicator, Box3 bbox) {
  json d = {{"type", "custom"}, {"name", name}};
  return Region(std::make_shared<const Impl>(
      Impl{Kind::custom, std::move(name), bbox, d, std::move(indicator)}));
}

Region Region::empty_set() { return halfspace(core::HalfSpace::empty()); }
Region Region::full_space() { return halfspace(core::HalfSpace::full()); }

Region Region::from_json(const json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
    throw Error(ErrorCode::schema_violation, "region needs a string 'type'");
  }
  const std::string type = j["type"].get<std::string>();
  if (type == "halfspace") {
    if (j.contains("sentinel")) {
      check_keys(j, {"type", "sentinel"});
      std::string s = j["sentinel"].is_string() ? j["sentinel"].get<std::string>() : "";
      if (s == "empty") return empty_set();
      if (s == "full") return full_space();
      throw Error(ErrorCode::schema_violation, "sentinel must be 'empty' or 'full'");
    }
    check_keys(j, {"type", "normal", "offset", "side"});
    Point n = require_point(j, "normal");
    double o = require_number(j, "offset");
    auto side = core::HalfSpace::Side::le;
    if (j.contains("side")) {
      std::string s = j["side"].is_string() ? j["side"].get<std::string>() : "";
      if (s == "ge") {
        side = core::HalfSpace::Side::ge;
      } else if (s != "le") {
        throw Error(ErrorCode::schema_violation, "side must be 'le' or 'ge'");
      }
    }
    try {
      return halfspace(core::HalfSpace({n.a, n.b, n.c}, o, side));
    } catch (const Error& e) {
      throw Error(ErrorCode::schema_violation, e.what());
    }
  }
  if (type == "bilinear") {
    check_keys(j, {"type"});
    return bilinear();
  }
  if (type == "ball") {
    check_keys(j, {"type", "center", "r"});
    double r = require_number(j, "r");
    if (!(r > 0.0)) throw Error(ErrorCode::schema_violation, "ball radius must be positive");
    return ball(require_point(j, "center"), r);
  }
  if (type == "voxel") {
    check_keys(j, {"type", "origin", "spacing", "dims", "data"});
    const json& dims = require(j, "dims");
    if (!dims.is_array() || dims.size() != 3) {
      throw Error(ErrorCode::schema_violation, "dims must have three entries");
    }
    std::array<std::int64_t, 3> d{};
    for (int i = 0; i < 3; ++i) {
      if (!dims[i].is_number_integer()) throw Error(ErrorCode::schema_violation, "dims must be integers");
      d[i] = dims[i].get<std::int64_t>();
    }
    const json& data = require(j, "data");
    if (!data.is_string()) throw Error(ErrorCode::schema_violation, "data must be a path string");
    std::filesystem::path path = data.get<std::string>();
    if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
    return voxel(VoxelGrid::load(require_point(j, "origin"), require_number(j, "spacing"), d, path));
  }
  if (type == "complement") {
    check_keys(j, {"type", "of"});
    return complement(from_json(require(j, "of"), base_dir));
  }
  if (type == "union") {
    check_keys(j, {"type", "of"});
    const json& of = require(j, "of");
    if (!of.is_array()) throw Error(ErrorCode::schema_violation, "union 'of' must be an array");
    std::vector<Region> parts;
    for (const auto& item : of) parts.push_back(from_json(item, base_dir));
    return unite(std::move(parts));
  }
  throw Error(ErrorCode::schema_violation, "unknown region type '" + type + "'");
}

}  // namespace heislab::geometry
