#pragma once

// Self-avoiding polygons of Z^2: validation, the canonical NE-anchored
// tour, corner/span queries, left/right classification, plaquette
// symmetric difference and (global) join plaquette detection.

#include <sapforge/lattice.hpp>

#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <utility>

namespace sapforge {

enum class PolyError {
  empty_edge_set,
  bad_degree,
  multiple_components,
  not_closed,
  not_a_join_plaquette,
  self_intersecting,
};

class polygon_error : public std::runtime_error {
 public:
  polygon_error(PolyError code, const std::string& what) : std::runtime_error(what), code_(code) {}
  PolyError code() const { return code_; }

 private:
  PolyError code_;
};

// Immutable planar polygon.  The canonical tour phi_0..phi_{n-1} starts
// at NE(phi), steps first to NE - e1 and ends at NE - e2 (the closing
// edge back to phi_0 is implicit).  Every vertex appears exactly once.
class Polygon {
 public:
  static Polygon from_edges(const std::vector<Edge>& edges) {
    if (edges.empty()) throw polygon_error(PolyError::empty_edge_set, "polygon: empty edge set");

    std::unordered_map<Pt, std::vector<Pt>, PtHash> adj;
    std::unordered_set<Edge, EdgeHash> seen;
    for (const Edge& e : edges) {
      if (z(e.a) != 0 || z(e.b) != 0)
        throw polygon_error(PolyError::bad_degree, "polygon: edges must lie in the e1-e2 plane");
      if (!seen.insert(e).second) continue;  // duplicate edges collapse
      adj[e.a].push_back(e.b);
      adj[e.b].push_back(e.a);
    }
    for (const auto& [v, nb] : adj)
      if (nb.size() != 2)
        throw polygon_error(PolyError::bad_degree, "polygon: vertex of degree != 2");

    std::vector<Pt> verts;
    verts.reserve(adj.size());
    for (const auto& [v, nb] : adj) verts.push_back(v);
    Pt start = corner_vertex(verts, Compass::NE);

    // canonical trace: NE -> NE - e1 -> ... -> NE - e2
    std::vector<Pt> tour;
    tour.reserve(adj.size());
    Pt prev = start;
    Pt cur = start - kE1;
    {
      const auto& nb = adj.at(start);
      if (!((nb[0] == cur && nb[1] == start - kE2) || (nb[1] == cur && nb[0] == start - kE2)))
        throw polygon_error(PolyError::bad_degree, "polygon: NE vertex has a non-canonical neighbourhood");
    }
    tour.push_back(start);
    while (cur != start) {
      tour.push_back(cur);
      const auto& nb = adj.at(cur);
      Pt nxt = (nb[0] == prev) ? nb[1] : nb[0];
      prev = cur;
      cur = nxt;
    }
    if (tour.size() != adj.size())
      throw polygon_error(PolyError::multiple_components, "polygon: edge set is not a single cycle");
    return Polygon(std::move(tour), true);
  }

  // tour lists phi_0..phi_{n-1}; the closing edge is implicit
  static Polygon from_tour(const std::vector<Pt>& tour) {
    std::vector<Edge> edges;
    edges.reserve(tour.size());
    for (std::size_t i = 0; i < tour.size(); ++i)
      edges.emplace_back(tour[i], tour[(i + 1) % tour.size()]);
    return from_edges(edges);
  }

  int length() const { return static_cast<int>(tour_.size()); }
  const std::vector<Pt>& tour() const { return tour_; }
  const std::vector<Pt>& sorted_vertices() const { return sorted_vertices_; }
  const std::vector<Edge>& sorted_edges() const { return sorted_edges_; }

  bool contains_vertex(const Pt& p) const {
    return std::binary_search(sorted_vertices_.begin(), sorted_vertices_.end(), p);
  }
  bool contains_edge(const Edge& e) const {
    return std::binary_search(sorted_edges_.begin(), sorted_edges_.end(), e);
  }

  Pt ne() const { return tour_.front(); }
  Pt corner(Compass c) const { return corner_vertex(tour_, c); }
  int ymax() const { return y(corner(Compass::NE)); }
  int ymin() const { return y(corner(Compass::SE)); }
  int xmax() const { return x(corner(Compass::EN)); }
  int xmin() const { return x(corner(Compass::WN)); }
  int height() const { return ymax() - ymin(); }
  int width() const { return xmax() - xmin(); }

  bool is_normalized() const { return ne() == pt(0, 0); }
  Polygon normalized() const { return translated(pt(0, 0) - ne()); }

  Polygon translated(const Pt& d) const {
    std::vector<Pt> t = tour_;
    for (Pt& p : t) p = p + d;
    return Polygon(std::move(t), true);
  }

  template <typename F>
  Polygon transformed(F&& motion) const {
    std::vector<Edge> edges;
    edges.reserve(tour_.size());
    for (std::size_t i = 0; i < tour_.size(); ++i)
      edges.emplace_back(motion(tour_[i]), motion(tour_[(i + 1) % tour_.size()]));
    return from_edges(edges);
  }

  // tour index of the (unique) visit to a vertex
  int tour_index(const Pt& p) const {
    for (std::size_t i = 0; i < tour_.size(); ++i)
      if (tour_[i] == p) return static_cast<int>(i);
    throw std::invalid_argument("tour_index: vertex not on polygon");
  }

  bool operator==(const Polygon& o) const { return tour_ == o.tour_; }
  bool operator<(const Polygon& o) const { return tour_ < o.tour_; }

 private:
  Polygon(std::vector<Pt> tour, bool) : tour_(std::move(tour)) {
    sorted_vertices_ = tour_;
    std::sort(sorted_vertices_.begin(), sorted_vertices_.end());
    sorted_edges_.reserve(tour_.size());
    for (std::size_t i = 0; i < tour_.size(); ++i)
      sorted_edges_.emplace_back(tour_[i], tour_[(i + 1) % tour_.size()]);
    std::sort(sorted_edges_.begin(), sorted_edges_.end());
    for (const Pt& p : tour_) check_coord_window(p);
  }

  std::vector<Pt> tour_;
  std::vector<Pt> sorted_vertices_;
  std::vector<Edge> sorted_edges_;
};

struct PolygonHash {
  std::size_t operator()(const Polygon& p) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    PtHash ph;
    for (const Pt& v : p.tour()) h = (h ^ ph(v)) * 1099511628211ull;
    return static_cast<std::size_t>(h);
  }
};

// ---- classification -----------------------------------------------------

struct LeftRight {
  bool is_left = false;
  bool is_right = false;
};

// Left/right polygon classification.  righttip(phi) is read as ES(phi).
inline LeftRight classify(const Polygon& phi) {
  LeftRight r;
  bool tall = phi.height() >= phi.width();
  r.is_right = tall;
  // y(ES) <= (ymin + ymax)/2, kept exact as 2 y(ES) <= ymin + ymax
  r.is_left = tall && 2 * y(phi.corner(Compass::ES)) <= phi.ymin() + phi.ymax();
  return r;
}

// ---- plaquette symmetric difference -------------------------------------

// P is a join plaquette of phi iff phi meets P in exactly its two
// horizontal edges.
inline bool is_join_plaquette(const Polygon& phi, const Plaquette& P) {
  for (const Edge& e : P.horizontal_edges())
    if (!phi.contains_edge(e)) return false;
  for (const Edge& e : P.vertical_edges())
    if (phi.contains_edge(e)) return false;
  return true;
}

inline std::vector<Plaquette> join_plaquettes(const Polygon& phi) {
  std::vector<Plaquette> out;
  // every candidate has one of phi's horizontal edges as its bottom edge
  std::unordered_set<Pt, PtHash> anchors;
  for (const Edge& e : phi.sorted_edges()) {
    if (e.axis() != 0) continue;
    anchors.insert(e.a);          // e as bottom edge
    anchors.insert(e.a - kE2);    // e as top edge
  }
  for (const Pt& a : anchors) {
    Plaquette P(a);
    if (is_join_plaquette(phi, P)) out.push_back(P);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// split at a join plaquette: remove P's horizontals, add its verticals
inline std::pair<Polygon, Polygon> split_at(const Polygon& phi, const Plaquette& P) {
  if (!is_join_plaquette(phi, P))
    throw polygon_error(PolyError::not_a_join_plaquette, "split_at: not a join plaquette of the polygon");
  std::unordered_set<Edge, EdgeHash> edges(phi.sorted_edges().begin(), phi.sorted_edges().end());
  for (const Edge& e : P.horizontal_edges()) edges.erase(e);
  for (const Edge& e : P.vertical_edges()) edges.insert(e);

  // the two vertical edges of P seed the two components
  auto vert = P.vertical_edges();
  std::vector<Edge> comp[2];
  std::unordered_set<Pt, PtHash> claimed;
  for (int side = 0; side < 2; ++side) {
    Pt prev = vert[side].a;
    Pt cur = vert[side].b;
    Pt start = prev;
    comp[side].push_back(vert[side]);
    claimed.insert(prev);
    while (cur != start) {
      claimed.insert(cur);
      // find the next edge out of cur
      Pt nxt{};
      bool found = false;
      for (const Pt& step : {cur + kE1, cur - kE1, cur + kE2, cur - kE2}) {
        if (step == prev) continue;
        Edge cand(cur, step);
        if (edges.count(cand)) {
          nxt = step;
          found = true;
          break;
        }
      }
      if (!found) throw polygon_error(PolyError::not_closed, "split_at: component failed to close");
      comp[side].emplace_back(cur, nxt);
      prev = cur;
      cur = nxt;
    }
  }
  if (comp[0].size() + comp[1].size() != edges.size())
    throw polygon_error(PolyError::multiple_components, "split_at: residual edges after split");
  return {Polygon::from_edges(comp[0]), Polygon::from_edges(comp[1])};
}

// join direction: two disjoint polygons each holding one vertical edge of P
inline Polygon join_at(const Polygon& a, const Polygon& b, const Plaquette& P) {
  auto vert = P.vertical_edges();
  bool a_left = a.contains_edge(vert[0]);
  const Polygon& holds_left = a_left ? a : b;
  const Polygon& holds_right = a_left ? b : a;
  if (!holds_left.contains_edge(vert[0]) || !holds_right.contains_edge(vert[1]))
    throw polygon_error(PolyError::not_a_join_plaquette,
                        "join_at: plaquette verticals not split across the pair");
  for (const Edge& e : P.horizontal_edges())
    if (a.contains_edge(e) || b.contains_edge(e))
      throw polygon_error(PolyError::not_a_join_plaquette, "join_at: horizontal edge already occupied");
  std::vector<Edge> edges;
  edges.reserve(a.length() + b.length());
  for (const Edge& e : a.sorted_edges()) edges.push_back(e);
  for (const Edge& e : b.sorted_edges()) {
    if (a.contains_edge(e))
      throw polygon_error(PolyError::self_intersecting, "join_at: polygons share an edge");
    edges.push_back(e);
  }
  std::erase(edges, vert[0]);
  std::erase(edges, vert[1]);
  for (const Edge& e : P.horizontal_edges()) edges.push_back(e);
  return Polygon::from_edges(edges);
}

// ---- global join plaquettes ---------------------------------------------

// Split pieces of a global join plaquette, labelled: left piece owns
// NE(phi), right piece owns every vertex of maximal x-coordinate.
struct GlobalSplit {
  Plaquette plaquette;
  Polygon left, right;
};

inline std::optional<GlobalSplit> try_global_split(const Polygon& phi, const Plaquette& P) {
  if (!is_join_plaquette(phi, P)) return std::nullopt;
  auto [p1, p2] = split_at(phi, P);
  int xm = phi.xmax();
  auto owns_all_rightmost = [xm](const Polygon& piece, const Polygon& other) {
    // all maximal-x vertices of the whole polygon lie in `piece`
    return piece.xmax() == xm && other.xmax() < xm;
  };
  const Pt ne = phi.ne();
  for (auto [l, r] : {std::pair<const Polygon*, const Polygon*>{&p1, &p2}, {&p2, &p1}}) {
    if (l->contains_vertex(ne) && owns_all_rightmost(*r, *l))
      return GlobalSplit{P, *l, *r};
  }
  return std::nullopt;
}

inline std::vector<Plaquette> global_join_plaquettes(const Polygon& phi) {
  std::vector<Plaquette> out;
  for (const Plaquette& P : join_plaquettes(phi))
    if (try_global_split(phi, P)) out.push_back(P);
  return out;  // already sorted by (anchor x, anchor y, ...) via Plaquette order
}

}  // namespace sapforge
