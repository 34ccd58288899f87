#pragma once

#include "json.hpp"

#include "heislab/core/point.hpp"

namespace heislab::core {

// Points serialize as [a,b,c]; grid points as integer triples.
void to_json(nlohmann::json& j, const Point& p);
void from_json(const nlohmann::json& j, Point& p);
void to_json(nlohmann::json& j, const GridPoint& p);
void from_json(const nlohmann::json& j, GridPoint& p);

}  // namespace heislab::core
