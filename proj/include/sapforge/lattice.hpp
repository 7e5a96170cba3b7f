#pragma once

// Integer geometry of Z^d (d = 2 or 3): points, unordered unit edges,
// plaquettes, compass corners, axial projections and the rigid motions
// used by the joining surgeries.

#include <array>
#include <algorithm>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sapforge {

// Coordinates live in a fixed 3-slot array; in dimension 2 the third
// slot is always zero.  The active dimension is carried by context.
using Pt = std::array<int, 3>;

constexpr int kCoordLimit = 1'000'000;  // surgery/enumeration safety window

inline Pt pt(int x, int y) { return Pt{x, y, 0}; }
inline Pt pt(int x, int y, int z) { return Pt{x, y, z}; }

inline int x(const Pt& p) { return p[0]; }
inline int y(const Pt& p) { return p[1]; }
inline int z(const Pt& p) { return p[2]; }

inline Pt operator+(const Pt& a, const Pt& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Pt operator-(const Pt& a, const Pt& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Pt operator*(int k, const Pt& a) { return {k * a[0], k * a[1], k * a[2]}; }

inline const Pt kE1 = pt(1, 0);
inline const Pt kE2 = pt(0, 1);
inline const Pt kE3 = pt(0, 0, 1);

inline int l1_norm(const Pt& p) { return std::abs(p[0]) + std::abs(p[1]) + std::abs(p[2]); }
inline long long norm_sq(const Pt& p) {
  return 1LL * p[0] * p[0] + 1LL * p[1] * p[1] + 1LL * p[2] * p[2];
}

inline void check_coord_window(const Pt& p) {
  for (int c : p)
    if (std::abs(c) > kCoordLimit) throw std::overflow_error("lattice coordinate outside safety window");
}

struct PtHash {
  std::size_t operator()(const Pt& p) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (int c : p) {
      h ^= static_cast<std::uint32_t>(c);
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

// Unordered nearest-neighbour edge; endpoints stored in lexicographic
// order so equality is orientation-free.
struct Edge {
  Pt a, b;

  Edge() : a{}, b{} {}
  Edge(const Pt& u, const Pt& v) {
    if (l1_norm(u - v) != 1) throw std::invalid_argument("edge endpoints must be lattice neighbours");
    if (u < v) { a = u; b = v; } else { a = v; b = u; }
  }

  // index of the single coordinate in which the endpoints differ
  int axis() const {
    for (int i = 0; i < 3; ++i)
      if (a[i] != b[i]) return i;
    return -1;  // unreachable for a valid edge
  }

  auto operator<=>(const Edge&) const = default;
};

struct EdgeHash {
  std::size_t operator()(const Edge& e) const noexcept {
    PtHash h;
    return h(e.a) * 1000003u ^ h(e.b);
  }
};

// Unit square in the e1-e2 plane, anchored at its minimal corner.
struct Plaquette {
  Pt anchor;

  Plaquette() : anchor{} {}
  explicit Plaquette(const Pt& a) : anchor(a) {}

  std::array<Pt, 4> corners() const {
    return {anchor, anchor + kE1, anchor + kE1 + kE2, anchor + kE2};
  }
  // e1-directed edges, bottom then top
  std::array<Edge, 2> horizontal_edges() const {
    return {Edge(anchor, anchor + kE1), Edge(anchor + kE2, anchor + kE1 + kE2)};
  }
  // e2-directed edges, left then right
  std::array<Edge, 2> vertical_edges() const {
    return {Edge(anchor, anchor + kE2), Edge(anchor + kE1, anchor + kE1 + kE2)};
  }
  std::array<Edge, 4> edges() const {
    auto h = horizontal_edges();
    auto v = vertical_edges();
    return {h[0], h[1], v[0], v[1]};
  }

  auto operator<=>(const Plaquette&) const = default;
};

// Compass corners of a finite planar vertex set (Definition of the eight
// extreme vertices: first letter is the primary extremum, second breaks
// ties; WS is the lexicographic minimum, EN the maximum).
enum class Compass { NE, EN, ES, SE, SW, WS, WN, NW };

inline const char* to_string(Compass c) {
  switch (c) {
    case Compass::NE: return "NE";
    case Compass::EN: return "EN";
    case Compass::ES: return "ES";
    case Compass::SE: return "SE";
    case Compass::SW: return "SW";
    case Compass::WS: return "WS";
    case Compass::WN: return "WN";
    case Compass::NW: return "NW";
  }
  return "?";
}

template <typename Range>
Pt corner_vertex(const Range& pts, Compass label) {
  auto it = std::begin(pts);
  auto end = std::end(pts);
  if (it == end) throw std::invalid_argument("corner_vertex: empty vertex set");

  // better(p, q): p strictly preferred to q under the label
  auto better = [label](const Pt& p, const Pt& q) {
    auto key = [label](const Pt& v) -> std::pair<int, int> {
      switch (label) {
        case Compass::NE: return {v[1], v[0]};    // max y, max x
        case Compass::EN: return {v[0], v[1]};    // max x, max y
        case Compass::ES: return {v[0], -v[1]};   // max x, min y
        case Compass::SE: return {-v[1], v[0]};   // min y, max x
        case Compass::SW: return {-v[1], -v[0]};  // min y, min x
        case Compass::WS: return {-v[0], -v[1]};  // min x, min y
        case Compass::WN: return {-v[0], v[1]};   // min x, max y
        case Compass::NW: return {v[1], -v[0]};   // max y, min x
      }
      return {0, 0};
    };
    return key(p) > key(q);
  };

  Pt best = *it;
  if (z(best) != 0) throw std::invalid_argument("corner_vertex requires d = 2");
  for (++it; it != end; ++it) {
    if (z(*it) != 0) throw std::invalid_argument("corner_vertex requires d = 2");
    if (better(*it, best)) best = *it;
  }
  return best;
}

// ---- rigid motions ------------------------------------------------------

// reflection in the vertical (e2-directed) line through z, d = 2
inline Pt reflect_vertical_line(const Pt& line, const Pt& p) {
  return pt(2 * x(line) - x(p), y(p), z(p));
}

// reflection in the hyperplane with normal e1 through z (any d)
inline Pt reflect_e1_hyperplane(const Pt& plane, const Pt& p) {
  return pt(2 * x(plane) - x(p), y(p), z(p));
}

// reflection in the horizontal line through z, d = 2
inline Pt reflect_horizontal_line(const Pt& line, const Pt& p) {
  return pt(x(p), 2 * y(line) - y(p), z(p));
}

// quarter turn about the origin in the e1-e2 plane
inline Pt rotate_quarter(const Pt& p) { return pt(-y(p), x(p), z(p)); }

// rotation by pi about z (any d): p -> 2z - p
inline Pt rotate_pi_about(const Pt& c, const Pt& p) { return 2 * c - p; }

// reflection in the x-axis, d = 2
inline Pt reflect_x_axis(const Pt& p) { return pt(x(p), -y(p), z(p)); }

template <typename F>
std::vector<Pt> map_points(const std::vector<Pt>& pts, F&& motion) {
  std::vector<Pt> out;
  out.reserve(pts.size());
  for (const Pt& p : pts) out.push_back(motion(p));
  return out;
}

// ---- axial projections --------------------------------------------------

// Proj_I: zero out the single coordinate not in I.  |I| must be d-1;
// axes are 1-based as in e_1..e_d.
inline std::vector<Pt> project_axial(const std::vector<Pt>& pts, const std::vector<int>& axes, int dim) {
  if (static_cast<int>(axes.size()) != dim - 1)
    throw std::invalid_argument("project_axial: axis set must have d-1 elements");
  std::array<bool, 3> keep{false, false, false};
  for (int a : axes) {
    if (a < 1 || a > dim) throw std::invalid_argument("project_axial: axis out of range");
    keep[a - 1] = true;
  }
  std::vector<Pt> out;
  out.reserve(pts.size());
  for (const Pt& p : pts) {
    Pt q = p;
    for (int i = 0; i < 3; ++i)
      if (!keep[i]) q[i] = 0;
    out.push_back(q);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// default projection: drop the e1 coordinate
inline std::vector<Pt> project_drop_e1(const std::vector<Pt>& pts, int dim) {
  std::vector<int> axes;
  for (int a = 2; a <= dim; ++a) axes.push_back(a);
  return project_axial(pts, axes, dim);
}

}  // namespace sapforge
