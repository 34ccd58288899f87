#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "heislab/core/point.hpp"

namespace heislab::core {

/// Word distance d_T(a, b) in the Cayley graph of H(Z) for the generating set
/// {(±1,0,0),(0,±1,0),(0,0,±1)}. Returns std::nullopt (over cap) when the
/// distance exceeds `cap`.
std::optional<int> word_distance(const GridPoint& a, const GridPoint& b, int cap);

/// The word ball of the given radius around the identity, with distances.
/// Elements are listed in BFS order; `index` maps each element to its slot.
class WordBall {
 public:
  explicit WordBall(int radius);

  int radius() const { return radius_; }
  std::size_t size() const { return elements_.size(); }
  const std::vector<GridPoint>& elements() const { return elements_; }
  const std::vector<int>& distances() const { return dist_; }

  /// Distance from the identity, or nullopt when outside the ball.
  std::optional<int> distance(const GridPoint& g) const;
  bool contains(const GridPoint& g) const { return index_.count(g) != 0; }

 private:
  int radius_;
  std::vector<GridPoint> elements_;
  std::vector<int> dist_;
  std::unordered_map<GridPoint, std::size_t, GridPointHash> index_;
};

}  // namespace heislab::core
