#include "heislab/core/point.hpp"

#include "heislab/core/json_io.hpp"
#include "heislab/error.hpp"

namespace heislab::core {

std::ostream& operator<<(std::ostream& os, const Point& p) {
  return os << '(' << p.a << ", " << p.b << ", " << p.c << ')';
}

std::ostream& operator<<(std::ostream& os, const GridPoint& p) {
  return os << '(' << p.a << ", " << p.b << ", " << p.c << ')';
}

void to_json(nlohmann::json& j, const Point& p) { j = nlohmann::json::array({p.a, p.b, p.c}); }

void from_json(const nlohmann::json& j, Point& p) {
  if (!j.is_array() || j.size() != 3) {
    throw Error(ErrorCode::schema_violation, "point must be a 3-element array");
  }
  p = {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
  if (!p.finite()) throw Error(ErrorCode::schema_violation, "point coordinates must be finite");
}

void to_json(nlohmann::json& j, const GridPoint& p) { j = nlohmann::json::array({p.a, p.b, p.c}); }

void from_json(const nlohmann::json& j, GridPoint& p) {
  if (!j.is_array() || j.size() != 3) {
    throw Error(ErrorCode::schema_violation, "grid point must be a 3-element array");
  }
  for (const auto& v : j) {
    if (!v.is_number_integer()) throw Error(ErrorCode::schema_violation, "grid point must be integral");
  }
  p = {j[0].get<std::int64_t>(), j[1].get<std::int64_t>(), j[2].get<std::int64_t>()};
}

}  // namespace heislab::core
