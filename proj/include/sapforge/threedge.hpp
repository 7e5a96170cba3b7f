#pragma once

// The 3-edge self-avoiding model in d >= 2: walks whose edge local time
// is capped at three, polygons up to translation and reparametrization,
// join/global-join edges, the simple-join surgery with its junction
// edge, left-right polygon pairs via axial projections, and the
// reflected double-back surgery with its reconstruction inverse.

#include <sapforge/enumerate.hpp>
#include <sapforge/io.hpp>
#include <sapforge/lattice.hpp>

#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <thread>
#include <tuple>

namespace sapforge {

// ---- walks with edge local time at most three ---------------------------

struct ThreeEdgeWalk {
  std::vector<Pt> vertices;
  std::map<Edge, int> edge_multiplicity;
  int dim = 2;

  int length() const { return static_cast<int>(vertices.size()) - 1; }
  bool closes() const { return vertices.size() >= 2 && vertices.front() == vertices.back(); }

  bool operator==(const ThreeEdgeWalk& o) const { return vertices == o.vertices; }
};

inline ThreeEdgeWalk make_3e_walk(std::vector<Pt> vertices, int dim = 2) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("3-edge walk: dim must be 2 or 3");
  if (vertices.empty()) throw std::invalid_argument("3-edge walk: empty vertex sequence");
  ThreeEdgeWalk w;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    check_coord_window(vertices[i]);
    if (dim == 2 && z(vertices[i]) != 0)
      throw std::invalid_argument("3-edge walk: nonzero third coordinate in dimension 2");
    if (i == 0) continue;
    Edge e(vertices[i - 1], vertices[i]);  // validates the unit step
    if (++w.edge_multiplicity[e] > 3)
      throw std::invalid_argument("3-edge walk: edge local time above three");
  }
  w.vertices = std::move(vertices);
  w.dim = dim;
  return w;
}

// ---- polygons up to translation and reparametrization -------------------

struct ThreeEdgePolygon {
  ThreeEdgeWalk representative;  // closing tour from the left vertex (the origin)
  int length = 0;
  int dim = 2;

  const std::vector<Pt>& tour() const { return representative.vertices; }

  // every vertex, sorted and deduplicated
  std::vector<Pt> vertex_set() const {
    std::vector<Pt> v(tour().begin(), tour().end() - 1);
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  }

  Pt left() const { return tour().front(); }  // lexicographic minimum = origin
  Pt right() const {                          // lexicographic maximum
    Pt best = tour().front();
    for (const Pt& p : tour())
      if (best < p) best = p;
    return best;
  }

  int xmin() const {
    int v = x(tour().front());
    for (const Pt& p : tour()) v = std::min(v, x(p));
    return v;
  }
  int xmax() const {
    int v = x(tour().front());
    for (const Pt& p : tour()) v = std::max(v, x(p));
    return v;
  }
  int x_span() const { return xmax() - xmin(); }

  bool operator==(const ThreeEdgePolygon& o) const {
    return tour() == o.tour() && dim == o.dim;
  }
  bool operator<(const ThreeEdgePolygon& o) const { return tour() < o.tour(); }
};

namespace detail3e {

// minimal list over every rotation and both orientations, translated so
// the lexicographically minimal vertex sits at the origin
inline std::vector<Pt> canonical_tour(const std::vector<Pt>& closing_vertices) {
  const int n = static_cast<int>(closing_vertices.size()) - 1;
  std::vector<Pt> t(closing_vertices.begin(), closing_vertices.end() - 1);
  Pt left = t.front();
  for (const Pt& p : t)
    if (p < left) left = p;
  for (Pt& p : t) p = p - left;

  std::vector<Pt> best, cand(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s)
    for (int dir : {1, -1}) {
      for (int i = 0; i < n; ++i) cand[i] = t[((s + dir * i) % n + n) % n];
      if (best.empty() || cand < best) best = cand;
    }
  best.push_back(best.front());
  return best;
}

}  // namespace detail3e

inline ThreeEdgePolygon canonicalize_3e(const ThreeEdgeWalk& gamma) {
  if (!gamma.closes()) throw std::invalid_argument("canonicalize: walk does not close");
  ThreeEdgePolygon phi;
  phi.length = gamma.length();
  phi.dim = gamma.dim;
  phi.representative = make_3e_walk(detail3e::canonical_tour(gamma.vertices), gamma.dim);
  return phi;
}

inline ThreeEdgePolygon translate_3e(const ThreeEdgePolygon& phi, const Pt& u) {
  ThreeEdgePolygon out = phi;
  std::vector<Pt> vs = phi.tour();
  for (Pt& p : vs) p = p + u;
  out.representative = make_3e_walk(std::move(vs), phi.dim);
  return out;
}

// number of distinct vertices after dropping the e1 coordinate
inline long long proj_size(const ThreeEdgePolygon& phi) {
  return static_cast<long long>(project_drop_e1(phi.vertex_set(), phi.dim).size());
}

// ---- enumeration ---------------------------------------------------------

namespace detail3e {

// DFS over 3-edge walks from the origin; reports every closing walk
// (closures are interior events: the walk may extend past them)
template <typename Sink>
void closing_dfs(std::vector<Pt>& walk, std::map<Edge, int>& mult, int dim, int max_len,
                 StateBudget& budget, long long& nodes, Sink&& sink) {
  const int len = static_cast<int>(walk.size()) - 1;
  if (++nodes >= 4096) {
    budget.spend(nodes);
    nodes = 0;
    if (budget.exceeded()) throw std::runtime_error("enumeration state cap exceeded");
  }
  if (len >= 2 && walk.back() == walk.front()) sink(walk);
  if (len == max_len) return;
  if (l1_norm(walk.back() - walk.front()) > max_len - len) return;  // cannot close again
  Pt nb[6];
  int deg = detail::neighbours(walk.back(), dim, nb);
  for (int i = 0; i < deg; ++i) {
    Edge e(walk.back(), nb[i]);
    auto it = mult.find(e);
    if (it != mult.end() && it->second >= 3) continue;
    ++mult[e];
    walk.push_back(nb[i]);
    closing_dfs(walk, mult, dim, max_len, budget, nodes, sink);
    walk.pop_back();
    if (--mult[e] == 0) mult.erase(e);
  }
}

}  // namespace detail3e

// distinct polygons (up to translation/reparametrization) per even length
inline CountTable count_threedge(int max_length, int dim = 2, int threads = 1) {
  if (max_length < 2 || max_length > kMaxEnumerationLength)
    throw std::invalid_argument("count_threedge: bad max_length");
  if (dim != 2 && dim != 3) throw std::invalid_argument("count_threedge: dim must be 2 or 3");

  std::map<int, std::set<std::vector<Pt>>> census;
  StateBudget budget;

  auto run_from = [&](std::vector<Pt> seed, std::map<int, std::set<std::vector<Pt>>>& into) {
    std::map<Edge, int> mult;
    for (std::size_t i = 1; i < seed.size(); ++i) ++mult[Edge(seed[i - 1], seed[i])];
    long long nodes = 0;
    detail3e::closing_dfs(seed, mult, dim, max_length, budget, nodes, [&](const std::vector<Pt>& w) {
      into[static_cast<int>(w.size()) - 1].insert(detail3e::canonical_tour(w));
    });
    budget.spend(nodes);
  };

  const int split = 3;
  if (threads <= 1 || max_length <= split) {
    run_from({pt(0, 0)}, census);
  } else {
    // prefix splitting as in the strict engine; closings at or below the
    // cut are collected during the root pass
    std::vector<std::vector<Pt>> units;
    {
      std::vector<Pt> walk{pt(0, 0)};
      std::map<Edge, int> mult;
      long long nodes = 0;
      detail3e::closing_dfs(walk, mult, dim, split, budget, nodes, [&](const std::vector<Pt>& w) {
        census[static_cast<int>(w.size()) - 1].insert(detail3e::canonical_tour(w));
      });
      // re-walk to harvest the depth-`split` prefixes
      std::function<void(std::vector<Pt>&, std::map<Edge, int>&)> gather =
          [&](std::vector<Pt>& wk, std::map<Edge, int>& m) {
            if (static_cast<int>(wk.size()) - 1 == split) {
              units.push_back(wk);
              return;
            }
            Pt nb[6];
            int deg = detail::neighbours(wk.back(), dim, nb);
            for (int i = 0; i < deg; ++i) {
              Edge e(wk.back(), nb[i]);
              auto it = m.find(e);
              if (it != m.end() && it->second >= 3) continue;
              ++m[e];
              wk.push_back(nb[i]);
              gather(wk, m);
              wk.pop_back();
              if (--m[e] == 0) m.erase(e);
            }
          };
      gather(walk, mult);
    }
    std::mutex census_mutex;
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    auto worker = [&] {
      try {
        for (;;) {
          std::size_t i = next.fetch_add(1);
          if (i >= units.size() || failed.load()) break;
          std::map<int, std::set<std::vector<Pt>>> local;
          run_from(units[i], local);
          std::lock_guard<std::mutex> lock(census_mutex);
          for (auto& [n, reps] : local) census[n].insert(reps.begin(), reps.end());
        }
      } catch (...) {
        failed.store(true);
      }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (failed.load() || budget.exceeded())
      throw std::runtime_error("enumeration state cap exceeded");
  }

  CountTable table;
  table.model = Model::threedge_sap;
  table.dim = dim;
  for (int n = 2; n <= max_length; n += 2) table.counts[n] = 0;
  for (const auto& [n, reps] : census) table.counts[n] = static_cast<long long>(reps.size());
  return table;
}

inline std::vector<ThreeEdgePolygon> all_threedge_polygons(int length, int dim = 2) {
  if (length < 2 || length % 2 != 0) throw std::invalid_argument("all_threedge_polygons: bad length");
  std::set<std::vector<Pt>> reps;
  StateBudget budget;
  std::vector<Pt> walk{pt(0, 0)};
  std::map<Edge, int> mult;
  long long nodes = 0;
  detail3e::closing_dfs(walk, mult, dim, length, budget, nodes, [&](const std::vector<Pt>& w) {
    if (static_cast<int>(w.size()) - 1 == length) reps.insert(detail3e::canonical_tour(w));
  });
  std::vector<ThreeEdgePolygon> out;
  for (const std::vector<Pt>& t : reps) {
    ThreeEdgePolygon phi;
    phi.length = length;
    phi.dim = dim;
    phi.representative = make_3e_walk(t, dim);
    out.push_back(std::move(phi));
  }
  return out;
}

// walks whose edge local time is capped at k (k = 1 relaxes strict
// self-avoidance: vertices may repeat, edges may not)
inline std::map<int, BigInt> k_edge_walk_counts(int k, int max_length, int dim = 2) {
  if (k < 1 || k > 3) throw std::invalid_argument("k_edge_walk_counts: k must be 1, 2 or 3");
  std::map<int, BigInt> counts;
  for (int n = 1; n <= max_length; ++n) counts[n] = 0;
  std::map<Edge, int> mult;
  std::vector<Pt> walk{pt(0, 0)};
  std::function<void()> rec = [&] {
    const int len = static_cast<int>(walk.size()) - 1;
    if (len >= 1) counts[len] += 1;
    if (len == max_length) return;
    Pt nb[6];
    int deg = detail::neighbours(walk.back(), dim, nb);
    for (int i = 0; i < deg; ++i) {
      Edge e(walk.back(), nb[i]);
      auto it = mult.find(e);
      if (it != mult.end() && it->second >= k) continue;
      ++mult[e];
      walk.push_back(nb[i]);
      rec();
      walk.pop_back();
      if (--mult[e] == 0) mult.erase(e);
    }
  };
  rec();
  return counts;
}

// ---- join edges ----------------------------------------------------------

namespace detail3e {

// tour indices of the two opposite-direction traversals of a
// multiplicity-two edge, or nothing if the traversals are parallel
inline std::optional<std::pair<int, int>> opposite_traversals(const std::vector<Pt>& tour,
                                                             const Edge& e) {
  std::vector<int> hits;
  for (std::size_t i = 0; i + 1 < tour.size(); ++i)
    if (Edge(tour[i], tour[i + 1]) == e) hits.push_back(static_cast<int>(i));
  if (hits.size() != 2) return std::nullopt;
  int i = hits[0], j = hits[1];
  if (tour[i] != tour[j + 1] || tour[i + 1] != tour[j]) return std::nullopt;
  return std::make_pair(i, j);
}

// the two closed pieces left by removing the traversals at i < j
inline std::pair<std::vector<Pt>, std::vector<Pt>> split_pieces(const std::vector<Pt>& tour,
                                                               int i, int j) {
  const int n = static_cast<int>(tour.size()) - 1;
  std::vector<Pt> inner(tour.begin() + i + 1, tour.begin() + j + 1);  // closed: ends = starts
  std::vector<Pt> outer;
  for (int s = j + 1; s <= n; ++s) outer.push_back(tour[s]);
  for (int s = 1; s <= i; ++s) outer.push_back(tour[s]);
  return {std::move(inner), std::move(outer)};
}

}  // namespace detail3e

// edges traversed exactly twice, once per direction, whose removal
// leaves two polygons (the length-2 polygon yields none: its pieces are
// empty)
inline std::vector<Edge> join_edges(const ThreeEdgePolygon& phi) {
  std::vector<Edge> out;
  for (const auto& [e, m] : phi.representative.edge_multiplicity) {
    if (m != 2) continue;
    auto trav = detail3e::opposite_traversals(phi.tour(), e);
    if (!trav) continue;
    auto [i, j] = *trav;
    auto [inner, outer] = detail3e::split_pieces(phi.tour(), i, j);
    if (inner.size() < 3 || outer.size() < 3) continue;  // a piece must be a polygon
    out.push_back(e);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// global join edges: the pieces can be labelled so that the left one
// alone holds every minimal-e1 vertex and the right one alone every
// maximal-e1 vertex
inline std::vector<Edge> global_join_edges(const ThreeEdgePolygon& phi) {
  const int lo = phi.xmin(), hi = phi.xmax();
  std::vector<Edge> out;
  for (const Edge& e : join_edges(phi)) {
    auto [i, j] = *detail3e::opposite_traversals(phi.tour(), e);
    auto [inner, outer] = detail3e::split_pieces(phi.tour(), i, j);
    std::set<Pt> vi(inner.begin(), inner.end()), vo(outer.begin(), outer.end());
    auto owns = [&](const std::set<Pt>& mine, const std::set<Pt>& other, int level) {
      for (const Pt& p : phi.vertex_set())
        if (x(p) == level && (!mine.count(p) || other.count(p))) return false;
      return true;
    };
    bool inner_right = owns(vi, vo, hi) && owns(vo, vi, lo);
    bool outer_right = owns(vo, vi, hi) && owns(vi, vo, lo);
    if (inner_right || outer_right) out.push_back(e);
  }
  return out;
}

// ---- the simple join -----------------------------------------------------

struct JoinOutcome3d {
  ThreeEdgePolygon joined;
  Edge junction;  // in the joined polygon's canonical coordinates
  Pt offset;      // translation applied to the second polygon before joining
  Pt shift;       // canonical translation applied to the combined tour
};

namespace detail3e {

inline std::set<Pt> vertex_set_of(const std::vector<Pt>& tour) {
  return std::set<Pt>(tour.begin(), tour.end());
}

inline bool disjoint(const std::set<Pt>& a, const std::set<Pt>& b, const Pt& delta) {
  for (const Pt& p : b)
    if (a.count(p + delta)) return false;
  return true;
}

}  // namespace detail3e

// slide the second polygon in from +e1 (after an optional transverse
// shift) to the last vertex-disjoint position
inline Pt slide_offset_3e(const ThreeEdgePolygon& phi, const ThreeEdgePolygon& psi,
                          const Pt& transverse = pt(0, 0)) {
  if (x(transverse) != 0) throw std::invalid_argument("slide: transverse shift must avoid e1");
  std::set<Pt> va = detail3e::vertex_set_of(phi.tour());
  std::set<Pt> vb = detail3e::vertex_set_of(psi.tour());
  auto pa = project_drop_e1(std::vector<Pt>(va.begin(), va.end()), phi.dim);
  auto pb = project_drop_e1(std::vector<Pt>(vb.begin(), vb.end()), psi.dim);
  bool overlap = false;
  for (const Pt& p : pb)
    if (std::binary_search(pa.begin(), pa.end(), p + transverse)) overlap = true;
  if (!overlap) throw std::invalid_argument("slide: projections are disjoint");

  int t = phi.xmax() - psi.xmin() + 1;  // surely disjoint
  while (detail3e::disjoint(va, vb, transverse + (t - 1) * kE1)) --t;
  return transverse + t * kE1;
}

inline JoinOutcome3d simple_join(const ThreeEdgePolygon& phi, const ThreeEdgePolygon& psi,
                                 const Pt& transverse = pt(0, 0)) {
  if (phi.dim != psi.dim) throw std::invalid_argument("simple_join: dimension mismatch");
  const Pt u = slide_offset_3e(phi, psi, transverse);
  std::set<Pt> va = detail3e::vertex_set_of(phi.tour());
  std::set<Pt> vb;
  for (const Pt& p : psi.tour()) vb.insert(p + u);

  // maximal e1-oriented bridging edge under (x of left endpoint, then
  // the remaining coordinates lexicographically)
  std::optional<Pt> best;
  auto consider = [&](const Pt& a) {
    if (!best || std::make_tuple(x(a), y(a), z(a)) > std::make_tuple(x(*best), y(*best), z(*best)))
      best = a;
  };
  for (const Pt& a : va)
    if (vb.count(a + kE1)) consider(a);
  for (const Pt& a : vb)
    if (va.count(a + kE1)) consider(a);
  if (!best) throw std::invalid_argument("simple_join: no bridging edge at the slide position");
  const Pt a = *best, b = a + kE1;
  const Pt p = va.count(a) ? a : b;  // junction endpoint inside phi
  const Pt q = (p == a) ? b : a;

  // phi until p is first met, across, all of psi from q, back, rest of phi
  std::vector<Pt> tour;
  std::size_t ip = 0;
  while (phi.tour()[ip] != p) ++ip;
  tour.insert(tour.end(), phi.tour().begin(), phi.tour().begin() + ip + 1);
  const int m = psi.length;
  std::size_t iq = 0;
  while (psi.tour()[iq] + u != q) ++iq;
  for (int s = 0; s <= m; ++s) tour.push_back(psi.tour()[(iq + s) % m] + u);
  tour.insert(tour.end(), phi.tour().begin() + ip, phi.tour().end());

  JoinOutcome3d out;
  out.joined = canonicalize_3e(make_3e_walk(tour, phi.dim));
  out.offset = u;
  Pt left = tour.front();
  for (const Pt& v : tour)
    if (v < left) left = v;
  out.shift = pt(0, 0) - left;
  out.junction = Edge(a + out.shift, b + out.shift);
  return out;
}

// removing the junction edge recovers the joined pair (as canonical
// polygons; the piece holding the left vertex comes first)
inline std::pair<ThreeEdgePolygon, ThreeEdgePolygon> simple_unjoin(const ThreeEdgePolygon& joined,
                                                                   const Edge& junction) {
  auto trav = detail3e::opposite_traversals(joined.tour(), junction);
  if (!trav) throw std::runtime_error("simple_unjoin: edge is not a junction of this polygon");
  auto [i, j] = *trav;
  auto [inner, outer] = detail3e::split_pieces(joined.tour(), i, j);
  if (inner.size() < 3 || outer.size() < 3)
    throw std::runtime_error("simple_unjoin: removal does not leave two polygons");
  ThreeEdgePolygon a = canonicalize_3e(make_3e_walk(inner, joined.dim));
  ThreeEdgePolygon b = canonicalize_3e(make_3e_walk(outer, joined.dim));
  // order by true position: the piece containing the origin is the left one
  bool outer_has_left = std::find(outer.begin(), outer.end(), joined.left()) != outer.end();
  if (outer_has_left) std::swap(a, b);
  return {a, b};
}

// ---- left-right pairs and strong join offsets ----------------------------

// x_span(phi) >= x_span(phi') and |Proj(phi')| >= (3d)^{-(1-1/d)} l^{1-1/d},
// the projection condition compared exactly as (3d)^{d-1} |Proj|^d >= l^{d-1}
inline bool left_right_pair_check(const ThreeEdgePolygon& phi, const ThreeEdgePolygon& phi2) {
  if (phi.dim != phi2.dim) throw std::invalid_argument("pair check: dimension mismatch");
  if (phi.x_span() < phi2.x_span()) return false;
  const int d = phi.dim;
  BigInt lhs = 1, rhs = 1;
  for (int i = 0; i < d - 1; ++i) lhs *= 3 * d, rhs *= phi2.length;
  for (int i = 0; i < d; ++i) lhs *= proj_size(phi2);
  return lhs >= rhs;
}

// is the placed pair (phi, psi) globally joinable?
inline bool globally_joinable_3e(const ThreeEdgePolygon& phi, const ThreeEdgePolygon& psi) {
  std::set<Pt> va = detail3e::vertex_set_of(phi.tour());
  std::set<Pt> vb = detail3e::vertex_set_of(psi.tour());
  if (!detail3e::disjoint(va, vb, pt(0, 0))) return false;
  if (detail3e::disjoint(va, vb, pt(-1, 0))) return false;  // not the slide position
  int lo_a = phi.xmin(), hi_a = phi.xmax();
  int lo_b = x(*vb.begin()), hi_b = lo_b;
  for (const Pt& p : vb) lo_b = std::min(lo_b, x(p)), hi_b = std::max(hi_b, x(p));
  return lo_a < lo_b && hi_b > hi_a;
}

// every offset u making (phi, phi' + u) globally joinable: one slide
// position per transverse shift, kept when the extremes separate
inline std::vector<Pt> strong_join_offsets_3e(const ThreeEdgePolygon& phi,
                                              const ThreeEdgePolygon& phi2) {
  if (phi.dim != phi2.dim) throw std::invalid_argument("strong join: dimension mismatch");
  std::vector<Pt> pa = project_drop_e1(phi.vertex_set(), phi.dim);
  std::vector<Pt> pb = project_drop_e1(phi2.vertex_set(), phi2.dim);
  std::set<Pt> shifts;
  for (const Pt& target : pa)
    for (const Pt& source : pb) shifts.insert(target - source);
  std::vector<Pt> out;
  for (const Pt& w : shifts) {
    Pt u = slide_offset_3e(phi, phi2, w);
    if (globally_joinable_3e(phi, translate_3e(phi2, u))) out.push_back(u);
  }
  return out;
}

// ---- reflected double-back surgery ---------------------------------------

// reflect the post-Right portion of the tour through the e1-hyperplane
// at Right(phi); for each selected global join edge, double back over
// its reflected image right after it is traversed
inline ThreeEdgeWalk s_kappa_3e(const ThreeEdgePolygon& phi, const std::set<int>& kappa) {
  const std::vector<Edge> gj = global_join_edges(phi);
  for (int i : kappa)
    if (i < 1 || i > static_cast<int>(gj.size()))
      throw std::invalid_argument("surgery: selection index outside the global join edges");
  std::set<Edge> selected;
  for (int i : kappa) selected.insert(gj[static_cast<std::size_t>(i - 1)]);

  const std::vector<Pt>& t = phi.tour();
  const int n = phi.length;
  const Pt r = phi.right();
  int j = 0;
  while (t[j] != r) ++j;

  std::vector<Pt> img(t.begin(), t.begin() + j + 1);
  std::set<Edge> done;
  for (int i = j; i < n; ++i) {
    img.push_back(reflect_e1_hyperplane(r, t[i + 1]));
    Edge original(t[i], t[i + 1]);
    if (selected.count(original) && done.insert(original).second) {
      // the post-Right arc crosses a join edge once: double back here
      Pt b = img.back(), a = img[img.size() - 2];
      img.push_back(a);
      img.push_back(b);
    }
  }
  if (done.size() != selected.size())
    throw std::logic_error("surgery: a selected join edge was never crossed after Right");
  try {
    return make_3e_walk(std::move(img), phi.dim);
  } catch (const std::invalid_argument&) {
    throw std::logic_error("surgery: edge local time exceeded three");
  }
}

// invert the double-back surgery: locate the fold, undo the detours
// (detected as locally doubled four-visit edges), refold and replay
inline ThreeEdgePolygon reconstruct_3e(const ThreeEdgeWalk& gamma, int detour_count) {
  auto fail = [] { return std::runtime_error("reconstruct: no preimage for this walk"); };
  const std::vector<Pt>& g = gamma.vertices;
  if (g.empty() || g.front() != pt(0, 0)) throw fail();
  const Pt end = g.back();
  if (x(end) % 2 != 0 || y(end) != y(g.front()) || z(end) != z(g.front())) throw fail();
  const int xr = x(end) / 2;

  for (std::size_t j = 0; j < g.size(); ++j) {
    if (x(g[j]) != xr) continue;
    // unfold after the candidate split
    std::vector<Pt> unfolded(g.begin(), g.begin() + j + 1);
    for (std::size_t i = j + 1; i < g.size(); ++i)
      unfolded.push_back(reflect_e1_hyperplane(g[j], g[i]));
    if (unfolded.back() != unfolded.front()) continue;

    std::map<Edge, int> mult;
    bool bad = false;
    for (std::size_t i = 0; i + 1 < unfolded.size(); ++i)
      if (++mult[Edge(unfolded[i], unfolded[i + 1])] > 4) bad = true;
    if (bad) continue;
    std::set<Edge> sites;
    for (const auto& [e, m] : mult)
      if (m == 4) sites.insert(e);
    if (static_cast<int>(sites.size()) != detour_count) continue;

    // strip one immediate double-back per four-visit edge, then verify
    std::vector<Pt> stripped = unfolded;
    bool ok = true;
    for (const Edge& e : sites) {
      bool removed = false;
      for (std::size_t s = j; s + 3 < stripped.size(); ++s) {
        if (stripped[s] == stripped[s + 2] && stripped[s + 1] == stripped[s + 3] &&
            Edge(stripped[s], stripped[s + 1]) == e) {
          stripped.erase(stripped.begin() + s + 2, stripped.begin() + s + 4);
          removed = true;
          break;
        }
      }
      if (!removed) ok = false;
    }
    if (!ok) continue;

    ThreeEdgePolygon phi;
    try {
      phi = canonicalize_3e(make_3e_walk(stripped, gamma.dim));
    } catch (const std::invalid_argument&) {
      continue;
    }
    const std::vector<Edge> gj = global_join_edges(phi);
    std::set<int> kappa;
    bool in_gj = true;
    for (const Edge& e : sites) {
      auto it = std::find(gj.begin(), gj.end(), e);
      if (it == gj.end()) in_gj = false;
      else kappa.insert(static_cast<int>(it - gj.begin()) + 1);
    }
    if (!in_gj || static_cast<int>(kappa.size()) != detour_count) continue;
    try {
      if (s_kappa_3e(phi, kappa).vertices == g) return phi;
    } catch (const std::logic_error&) {
    }
  }
  throw fail();
}

// ---- serialization -------------------------------------------------------

inline json threedge_polygon_to_json(const ThreeEdgePolygon& phi) {
  std::vector<Pt> open(phi.tour().begin(), phi.tour().end() - 1);
  return json{{"dim", phi.dim}, {"n", phi.length}, {"tour", vertices_to_json(open, phi.dim)}};
}

inline ThreeEdgePolygon threedge_polygon_from_json(const json& j) {
  const int dim = j.at("dim").get<int>();
  std::vector<Pt> tour = vertices_from_json(j.at("tour"), dim);
  if (static_cast<int>(tour.size()) != j.at("n").get<int>())
    throw std::invalid_argument("3-edge record: n does not match tour size");
  tour.push_back(tour.front());
  ThreeEdgePolygon phi = canonicalize_3e(make_3e_walk(tour, dim));
  if (phi.tour() != tour) throw std::invalid_argument("3-edge record: tour is not canonical");
  return phi;
}

}  // namespace sapforge
