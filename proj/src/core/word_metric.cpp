#include "heislab/core/word_metric.hpp"

#include <deque>
#include <unordered_set>

#include "heislab/core/constants.hpp"
#include "heislab/error.hpp"

namespace heislab::core {

std::optional<int> word_distance(const GridPoint& a, const GridPoint& b, int cap) {
  if (cap < 0) throw Error(ErrorCode::invalid_argument, "cap must be nonnegative");
  const GridPoint target = multiply(inverse(a), b);
  if (target == GridPoint{}) return 0;

  // Frontier-by-frontier BFS from the identity; right multiplication by
  // generators walks the Cayley graph.
  std::unordered_set<GridPoint, GridPointHash> seen{GridPoint{}};
  std::vector<GridPoint> frontier{GridPoint{}};
  for (int depth = 1; depth <= cap; ++depth) {
    std::vector<GridPoint> next;
    for (const auto& g : frontier) {
      for (const auto& t : PaperConstants::generators) {
        GridPoint h = multiply(g, t);
        if (!seen.insert(h).second) continue;
        if (h == target) return depth;
        next.push_back(h);
      }
    }
    frontier = std::move(next);
  }
  return std::nullopt;
}

WordBall::WordBall(int radius) : radius_(radius) {
  if (radius < 0) throw Error(ErrorCode::invalid_argument, "radius must be nonnegative");
  elements_.push_back(GridPoint{});
  dist_.push_back(0);
  index_.emplace(GridPoint{}, 0);
  std::size_t begin = 0;
  for (int depth = 1; depth <= radius; ++depth) {
    std::size_t end = elements_.size();
    for (std::size_t i = begin; i < end; ++i) {
      for (const auto& t : PaperConstants::generators) {
        GridPoint h = multiply(elements_[i], t);
        if (index_.count(h)) continue;
        index_.emplace(h, elements_.size());
        elements_.push_back(h);
        dist_.push_back(depth);
      }
    }
    begin = end;
  }
}

std::optional<int> WordBall::distance(const GridPoint& g) const {
  auto it = index_.find(g);
  if (it == index_.end()) return std::nullopt;
  return dist_[it->second];
}

}  // namespace heislab::core
