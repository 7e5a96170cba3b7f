#pragma once

// Finite lattice walks with unit steps, plus the half-space and bridge
// predicates used by the reflection surgeries.

#include <sapforge/lattice.hpp>

#include <unordered_set>

namespace sapforge {

// gamma_0..gamma_n; `strict` records that vertex-self-avoidance has
// been verified.
struct Walk {
  std::vector<Pt> vertices;
  bool strict = false;

  int length() const { return static_cast<int>(vertices.size()) - 1; }
  const Pt& front() const { return vertices.front(); }
  const Pt& back() const { return vertices.back(); }

  bool operator==(const Walk& o) const { return vertices == o.vertices; }
  bool operator<(const Walk& o) const { return vertices < o.vertices; }
};

inline Walk make_walk(std::vector<Pt> vertices) {
  if (vertices.empty()) throw std::invalid_argument("walk: needs at least one vertex");
  for (std::size_t i = 0; i + 1 < vertices.size(); ++i)
    if (l1_norm(vertices[i + 1] - vertices[i]) != 1)
      throw std::invalid_argument("walk: non-unit step");
  Walk w;
  w.vertices = std::move(vertices);
  return w;
}

inline bool is_self_avoiding(const Walk& w) {
  std::unordered_set<Pt, PtHash> seen;
  for (const Pt& p : w.vertices)
    if (!seen.insert(p).second) return false;
  return true;
}

inline Walk checked_self_avoiding(std::vector<Pt> vertices) {
  Walk w = make_walk(std::move(vertices));
  if (!is_self_avoiding(w)) throw std::invalid_argument("walk: vertex revisited");
  w.strict = true;
  return w;
}

// Returning half-space walk: stays in y <= 0, and after the last visit
// to the minimal y-coordinate touches the x-axis exactly once, at the
// final vertex.
inline bool is_returning_half_space(const Walk& w) {
  int ymin = 0;
  for (const Pt& p : w.vertices) {
    if (y(p) > 0) return false;
    ymin = std::min(ymin, y(p));
  }
  std::size_t last_min = 0;
  for (std::size_t i = 0; i < w.vertices.size(); ++i)
    if (y(w.vertices[i]) == ymin) last_min = i;
  // strictly after the last minimal-y visit: exactly one axis touch, at the end
  int axis_visits = 0;
  for (std::size_t i = last_min + 1; i < w.vertices.size(); ++i)
    if (y(w.vertices[i]) == 0) ++axis_visits;
  return axis_visits == 1 && y(w.back()) == 0;
}

// Bridge in direction `axis` (0 = e1, 1 = e2): the start attains the
// maximal coordinate and the end uniquely attains the minimal one.
// The planar convention bridges downward along e2.
inline bool is_bridge(const Walk& w, int axis = 1) {
  int cmax = w.vertices.front()[axis];
  int cmin = w.vertices.back()[axis];
  if (cmax < cmin) return false;
  for (std::size_t i = 0; i < w.vertices.size(); ++i) {
    int c = w.vertices[i][axis];
    if (c > cmax) return false;
    if (c < cmin) return false;
    if (c == cmin && i + 1 != w.vertices.size()) return false;
  }
  return true;
}

template <typename F>
Walk transform_walk(const Walk& w, F&& motion) {
  Walk out;
  out.vertices.reserve(w.vertices.size());
  for (const Pt& p : w.vertices) out.vertices.push_back(motion(p));
  out.strict = w.strict;
  return out;
}

inline Walk translate_walk(const Walk& w, const Pt& d) {
  return transform_walk(w, [&](const Pt& p) { return p + d; });
}

}  // namespace sapforge
