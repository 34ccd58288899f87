#include "heislab/cuts/compression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "heislab/core/word_metric.hpp"
#include "heislab/error.hpp"

namespace heislab::cuts {

GridMap read_grid_map(const nlohmann::json& j) {
  auto bad = [](const std::string& msg) { throw Error(ErrorCode::schema_violation, "grid map: " + msg); };
  if (!j.is_array()) bad("expected a list");
  GridMap f;
  std::size_t dim = 0;
  for (const auto& item : j) {
    if (!item.is_object() || item.size() != 2 || !item.contains("point") || !item.contains("image")) {
      bad("entries must be {\"point\": [a,b,c], \"image\": [...]}");
    }
    const auto& p = item["point"];
    if (!p.is_array() || p.size() != 3 || !std::all_of(p.begin(), p.end(), [](const auto& v) {
          return v.is_number_integer();
        })) {
      bad("point must be three integers");
    }
    const auto& im = item["image"];
    if (!im.is_array() || im.empty()) bad("image must be a nonempty list");
    std::vector<double> v;
    for (const auto& x : im) {
      if (!x.is_number() || !std::isfinite(x.get<double>())) bad("image entries must be finite numbers");
      v.push_back(x.get<double>());
    }
    if (f.empty()) dim = v.size();
    if (v.size() != dim) bad("images must share one dimension");
    GridPoint g{p[0].get<std::int64_t>(), p[1].get<std::int64_t>(), p[2].get<std::int64_t>()};
    if (!f.emplace(g, std::move(v)).second) bad("duplicate point");
  }
  return f;
}

nlohmann::json to_json(const GridMap& f) {
  auto out = nlohmann::json::array();
  for (const auto& [g, v] : f) out.push_back({{"point", {g.a, g.b, g.c}}, {"image", v}});
  return out;
}

double l1_norm_diff(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw Error(ErrorCode::invalid_argument, "image dimensions differ");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += std::abs(x[i] - y[i]);
  return s;
}

namespace {

std::vector<const std::vector<double>*> images(const std::vector<GridPoint>& points, const GridMap& f,
                                               const core::WordBall& ball) {
  std::vector<const std::vector<double>*> out;
  out.reserve(points.size());
  for (const auto& g : points) {
    if (!ball.contains(g)) throw Error(ErrorCode::invalid_argument, "point outside the word ball");
    auto it = f.find(g);
    if (it == f.end()) throw Error(ErrorCode::invalid_argument, "map undefined at a point");
    out.push_back(&it->second);
  }
  return out;
}

}  // namespace

CompressionTable compression_rate(const std::vector<GridPoint>& points, const GridMap& f, int radius) {
  if (points.empty()) throw Error(ErrorCode::invalid_argument, "empty point set");
  if (radius < 0) throw Error(ErrorCode::invalid_argument, "negative radius");
  const core::WordBall ball(radius);
  const auto img = images(points, f, ball);
  const core::WordBall pairs_ball(2 * radius);
  CompressionTable out;
  std::vector<double> by_distance(2 * static_cast<std::size_t>(radius) + 1,
                                  std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const GridPoint inv = core::inverse(points[i]);
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      auto dist = pairs_ball.distance(inv * points[j]);
      if (!dist) throw Error(ErrorCode::invalid_argument, "pair outside the doubled ball");
      if (*dist == 0) continue;
      const double delta = l1_norm_diff(*img[i], *img[j]);
      ++out.pairs;
      out.max_distance = std::max(out.max_distance, *dist);
      by_distance[*dist] = std::min(by_distance[*dist], delta);
      if (*dist == 1) out.lipschitz = std::max(out.lipschitz, delta);
    }
  }
  out.omega.assign(out.max_distance, 0.0);
  double suffix = std::numeric_limits<double>::infinity();
  for (int t = out.max_distance; t >= 1; --t) {
    suffix = std::min(suffix, by_distance[t]);
    out.omega[t - 1] = suffix;
  }
  return out;
}

std::vector<CollapseRow> collapse_scan(const std::vector<GridPoint>& points, const GridMap& f,
                                       int radius, double threshold) {
  if (points.empty()) throw Error(ErrorCode::invalid_argument, "empty point set");
  if (radius < 1) throw Error(ErrorCode::invalid_argument, "radius must be at least 1");
  if (!(threshold >= 0.0)) throw Error(ErrorCode::invalid_argument, "threshold must be nonnegative");
  const core::WordBall ball(radius);
  const auto img = images(points, f, ball);
  const core::WordBall pairs_ball(2 * radius);
  std::vector<CollapseRow> rows(radius);
  for (int s = 1; s <= radius; ++s) rows[s - 1].scale = s;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      if (points[i].a != points[j].a || points[i].b != points[j].b) continue;
      auto dist = pairs_ball.distance(core::inverse(points[i]) * points[j]);
      if (!dist) throw Error(ErrorCode::invalid_argument, "pair outside the doubled ball");
      const bool collapsed = l1_norm_diff(*img[i], *img[j]) <= threshold * *dist;
      for (auto& row : rows) {
        if (*dist >= row.scale && *dist <= 2 * row.scale) {
          ++row.pairs;
          if (collapsed) ++row.collapsed;
        }
      }
    }
  }
  for (auto& row : rows) {
    if (row.pairs == 0) {
      row.fraction = row.std_error = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    row.fraction = static_cast<double>(row.collapsed) / static_cast<double>(row.pairs);
    row.std_error = std::sqrt(row.fraction * (1.0 - row.fraction) / static_cast<double>(row.pairs));
  }
  return rows;
}

}  // namespace heislab::cuts
