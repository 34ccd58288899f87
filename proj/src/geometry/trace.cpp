#include "heislab/geometry/trace.hpp"

#include <algorithm>
#include <cmath>

#include "heislab/core/constants.hpp"
#include "heislab/error.hpp"

namespace heislab::geometry {

namespace {

struct Run {
  double lo;
  double hi;
  bool in;
};

// Drops runs shorter than `min_len`, shortest first; a dropped run is
// absorbed by its neighbours, which then merge.
void absorb_short_runs(std::vector<Run>& runs, double min_len) {
  for (;;) {
    if (runs.size() <= 1) return;
    std::size_t worst = runs.size();
    double worst_len = min_len;
    for (std::size_t i = 0; i < runs.size(); ++i) {
      double len = runs[i].hi - runs[i].lo;
      if (len < worst_len) worst = i, worst_len = len;
    }
    if (worst == runs.size()) return;
    if (worst == 0) {
      runs[1].lo = runs[0].lo;
      runs.erase(runs.begin());
    } else if (worst + 1 == runs.size()) {
      runs[worst - 1].hi = runs[worst].hi;
      runs.pop_back();
    } else {
      runs[worst - 1].hi = runs[worst + 1].hi;
      runs.erase(runs.begin() + static_cast<std::ptrdiff_t>(worst),
                 runs.begin() + static_cast<std::ptrdiff_t>(worst) + 2);
    }
  }
}

}  // namespace

double IntervalTrace::mass() const {
  double m = 0.0;
  for (const auto& s : segments) m += s.length();
  return m;
}

std::vector<Interval> IntervalTrace::parts() const {
  if (!pieces.empty()) return pieces;
  if (empty_window()) return {};
  return {window};
}

double IntervalTrace::extent() const {
  double m = 0.0;
  for (const auto& p : parts()) m += p.length();
  return m;
}

IntervalTrace IntervalTrace::complement() const {
  IntervalTrace out{window, {}, resolution, pieces};
  auto seg = segments.begin();
  for (const auto& p : parts()) {
    double cursor = p.lo;
    for (; seg != segments.end() && seg->lo < p.hi; ++seg) {
      if (seg->lo > cursor) out.segments.push_back({cursor, seg->lo});
      cursor = seg->hi;
    }
    if (cursor < p.hi) out.segments.push_back({cursor, p.hi});
  }
  return out;
}

bool IntervalTrace::valid() const {
  auto ps = parts();
  double cursor = window.lo;
  for (const auto& s : segments) {
    if (s.lo < cursor || s.hi > window.hi || !(s.hi > s.lo)) return false;
    if (s.length() < resolution * (1.0 - 1e-12)) return false;
    bool contained = std::any_of(ps.begin(), ps.end(),
                                 [&](const Interval& p) { return s.lo >= p.lo && s.hi <= p.hi; });
    if (!contained) return false;
    cursor = s.hi;
  }
  return true;
}

namespace {

// Runs of the indicator over one piece, already cleaned of short runs.
std::vector<Run> piece_runs(const Region& e, const HorizontalLine& line, Interval piece, double h_target) {
  const double len = piece.length();
  const auto n = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(len / h_target)));
  const double h = len / static_cast<double>(n);
  auto at = [&](std::int64_t i) { return i == n ? piece.hi : piece.lo + h * static_cast<double>(i); };
  auto inside = [&](double t) { return e.contains(line.at(t)); };

  std::vector<Run> runs;
  bool state = inside(piece.lo);
  double run_start = piece.lo;
  double prev_t = piece.lo;
  for (std::int64_t i = 1; i <= n; ++i) {
    double t = at(i);
    bool s = inside(t);
    if (s != state) {
      double a = prev_t, b = t;
      for (int k = 0; k < core::Tolerances::trace_refinements; ++k) {
        double mid = 0.5 * (a + b);
        (inside(mid) == state ? a : b) = mid;
      }
      double cross = 0.5 * (a + b);
      runs.push_back({run_start, cross, state});
      run_start = cross;
      state = s;
    }
    prev_t = t;
  }
  runs.push_back({run_start, piece.hi, state});
  absorb_short_runs(runs, h_target);
  return runs;
}

IntervalTrace trace_pieces(const Region& e, const HorizontalLine& line, std::vector<Interval> pieces,
                           double step) {
  if (!(step > 0.0)) throw Error(ErrorCode::invalid_argument, "restrict needs step > 0");
  IntervalTrace out{{0.0, 0.0}, {}, step};
  if (pieces.empty()) return out;
  out.window = {pieces.front().lo, pieces.back().hi};
  double extent = 0.0;
  for (const auto& p : pieces) extent += p.length();
  if (!(extent > 0.0)) return out;
  out.resolution = std::min(step, extent / 8.0);
  std::erase_if(pieces, [&](const Interval& p) { return p.length() < out.resolution; });
  for (const auto& p : pieces) {
    for (const auto& r : piece_runs(e, line, p, std::min(out.resolution, p.length()))) {
      if (r.in) out.segments.push_back({r.lo, r.hi});
    }
  }
  if (pieces.size() > 1) out.pieces = std::move(pieces);
  return out;
}

}  // namespace

IntervalTrace restrict_to_window(const Region& e, const HorizontalLine& line, Interval window,
                                 double step) {
  if (!(window.hi > window.lo)) return trace_pieces(e, line, {}, step);
  return trace_pieces(e, line, {window}, step);
}

IntervalTrace restrict_to_line(const Region& e, const HorizontalLine& line, const Point& center,
                               double r, double step) {
  std::vector<Interval> pieces;
  for (auto [lo, hi] : ball_pieces(line, center, r)) pieces.push_back({lo, hi});
  return trace_pieces(e, line, std::move(pieces), step);
}

}  // namespace heislab::geometry
