#pragma once

// Reflection surgeries on planar polygons: the split-and-reflect map, its
// detour variants around global join plaquettes, the exact inverse
// reconstruction, and the half-space-to-bridge fold.  Also the generic
// arrow-ledger bound for multi-valued maps and the sum-map target count.

#include <sapforge/enumerate.hpp>
#include <sapforge/polygon.hpp>
#include <sapforge/walk.hpp>

#include <limits>
#include <map>
#include <optional>
#include <set>

namespace sapforge {

// ---- split and reflect ---------------------------------------------------

// Concatenation of the tour from NE to ES with the reflection of the
// remainder through the vertical line at ES.  Length is preserved; the
// endpoint lands on the x-axis at x = 2 x(ES), which is the key that
// makes the map invertible.  The image may graze its own starting point
// when ES shares the NE column, so strictness is not claimed here.
inline Walk reflect_split(const Polygon& phi) {
  if (!phi.is_normalized()) throw std::invalid_argument("reflect_split: polygon not normalized");
  const Pt es = phi.corner(Compass::ES);
  const int j = phi.tour_index(es);
  const std::vector<Pt>& tour = phi.tour();
  std::vector<Pt> out;
  out.reserve(tour.size() + 1);
  for (int i = 0; i <= j; ++i) out.push_back(tour[i]);
  for (int i = j + 1; i <= phi.length(); ++i)
    out.push_back(reflect_vertical_line(es, tour[i % phi.length()]));
  return make_walk(std::move(out));
}

// ---- detour maps ---------------------------------------------------------

// kappa selects global join plaquettes by 1-based index into the list
// sorted by anchor.  For each selected plaquette the single edge that
// the post-ES arc traverses is replaced by the three-step route around
// the other side before the reflection is applied.
inline Walk s_kappa(const Polygon& phi, const std::set<int>& kappa) {
  if (!phi.is_normalized()) throw std::invalid_argument("s_kappa: polygon not normalized");
  const std::vector<Plaquette> gj = global_join_plaquettes(phi);
  for (int j : kappa)
    if (j < 1 || j > static_cast<int>(gj.size()))
      throw std::invalid_argument("s_kappa: detour index out of range");

  const Pt es = phi.corner(Compass::ES);
  const int split = phi.tour_index(es);
  const std::vector<Pt>& tour = phi.tour();
  const int n = phi.length();

  // the post-ES arc phi_[split, n]
  std::vector<Pt> arc;
  for (int i = split; i <= n; ++i) arc.push_back(tour[i % n]);

  // locate the step of the arc that crosses each selected plaquette and
  // rewrite from the back so earlier indices stay valid
  std::map<int, Plaquette, std::greater<int>> steps;
  for (int j : kappa) {
    const Plaquette& P = gj[static_cast<std::size_t>(j - 1)];
    std::optional<int> where;
    for (std::size_t t = 0; t + 1 < arc.size(); ++t) {
      Edge e(arc[t], arc[t + 1]);
      for (const Edge& h : P.horizontal_edges())
        if (e == h) where = static_cast<int>(t);
    }
    if (!where) throw std::logic_error("s_kappa: arc misses a global join plaquette");
    if (!steps.emplace(*where, P).second)
      throw std::logic_error("s_kappa: two plaquettes share an arc step");
  }
  for (const auto& [t, P] : steps) {
    const Pt s = arc[static_cast<std::size_t>(t)];
    const Pt f = arc[static_cast<std::size_t>(t) + 1];
    // detour through the opposite horizontal edge of the plaquette
    const int dy = (y(s) == y(P.anchor)) ? 1 : -1;
    arc.insert(arc.begin() + t + 1, {s + pt(0, dy), f + pt(0, dy)});
  }

  std::vector<Pt> out;
  out.reserve(static_cast<std::size_t>(split) + arc.size());
  for (int i = 0; i <= split; ++i) out.push_back(tour[i]);
  for (std::size_t i = 1; i < arc.size(); ++i) out.push_back(reflect_vertical_line(es, arc[i]));
  Walk w = make_walk(std::move(out));
  if (w.length() != n + 2 * static_cast<int>(kappa.size()))
    throw std::logic_error("s_kappa: length law violated");
  return w;
}

// ---- inverse reconstruction ----------------------------------------------

// Recovers the unique polygon whose detour image is gamma, given how
// many detours were taken.  Every structural expectation is enforced;
// any mismatch means gamma is not in the image.
inline Polygon reconstruct(const Walk& gamma, int detour_count) {
  auto fail = [](const char* what) {
    return std::runtime_error(std::string("reconstruct: no preimage: ") + what);
  };
  if (detour_count < 0) throw std::invalid_argument("reconstruct: negative detour count");
  const std::vector<Pt>& g = gamma.vertices;
  if (g.size() < 5 || g.front() != pt(0, 0)) throw fail("walk does not start at the origin");
  if (x(g.back()) % 2 != 0 || y(g.back()) != 0) throw fail("endpoint is not a reflection key");
  const int x_es = x(g.back()) / 2;

  // ES is the lowest vertex of gamma in its column
  std::optional<std::size_t> at;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (x(g[i]) == x_es && (!at || y(g[i]) < y(g[*at]))) at = i;
  if (!at) throw fail("no vertex in the key column");
  const Pt es = g[*at];

  // unfold: reflect the suffix back through the vertical line at ES
  std::vector<Pt> omega(g.begin(), g.begin() + static_cast<long>(*at) + 1);
  for (std::size_t i = *at + 1; i < g.size(); ++i)
    omega.push_back(reflect_vertical_line(es, g[i]));
  if (omega.back() != pt(0, 0)) throw fail("unfolded walk is not closed");

  // each detour shows up as one doubly traversed horizontal edge (the
  // plaquette side shared with the pre-ES arc); doubled verticals can
  // also appear when two detoured plaquettes sit side by side, and those
  // disappear on their own as the journeys around them are removed
  std::map<Edge, std::vector<std::size_t>> crossings;
  for (std::size_t i = 0; i + 1 < omega.size(); ++i)
    crossings[Edge(omega[i], omega[i + 1])].push_back(i);
  std::vector<std::size_t> second;  // step index of each second crossing
  for (const auto& [e, idx] : crossings) {
    if (idx.size() > 2) throw fail("edge traversed more than twice");
    if (idx.size() == 2 && e.axis() == 0) second.push_back(idx[1]);
  }
  if (static_cast<int>(second.size()) != detour_count) throw fail("detour count mismatch");

  // remove the three-step journeys, from the back
  std::sort(second.rbegin(), second.rend());
  std::vector<Plaquette> sites;
  for (std::size_t i2 : second) {
    if (i2 == 0 || i2 + 2 >= omega.size()) throw fail("second crossing at the walk boundary");
    const Pt a = omega[i2 - 1], b = omega[i2 + 2];
    if (l1_norm(b - a) != 1) throw fail("journey does not shortcut to a unit step");
    Pt anchor = a;
    for (const Pt& q : {a, b, omega[i2], omega[i2 + 1]})
      anchor = pt(std::min(x(anchor), x(q)), std::min(y(anchor), y(q)));
    sites.push_back(Plaquette(anchor));
    omega.erase(omega.begin() + static_cast<long>(i2), omega.begin() + static_cast<long>(i2) + 2);
  }

  omega.pop_back();  // drop the duplicated origin; the closing edge is implicit
  Polygon phi = [&] {
    try {
      return Polygon::from_tour(omega);
    } catch (const std::exception& e) {
      throw fail(e.what());
    }
  }();

  // round-trip check: the detour sites must be global join plaquettes
  // and replaying the surgery must reproduce gamma exactly
  const std::vector<Plaquette> gj = global_join_plaquettes(phi);
  std::set<int> kappa;
  for (const Plaquette& P : sites) {
    auto it = std::lower_bound(gj.begin(), gj.end(), P);
    if (it == gj.end() || !(*it == P)) throw fail("detour site is not a global join plaquette");
    kappa.insert(static_cast<int>(it - gj.begin()) + 1);
  }
  if (s_kappa(phi, kappa).vertices != g) throw fail("surgery replay disagrees");
  return phi;
}

// ---- half-space fold -----------------------------------------------------

// Reflects the suffix after the last minimal-y visit upward, turning a
// returning half-space walk into a bridge.  Injective: the fold line can
// be read off as half the y-coordinate of the image endpoint.
inline Walk fold_to_bridge(const Walk& gamma) {
  if (!is_self_avoiding(gamma) || !is_returning_half_space(gamma))
    throw std::invalid_argument("fold_to_bridge: walk is not a returning half-space walk");
  const std::vector<Pt>& g = gamma.vertices;
  int ymin = 0;
  for (const Pt& p : g) ymin = std::min(ymin, y(p));
  std::size_t last = 0;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (y(g[i]) == ymin) last = i;
  std::vector<Pt> out(g.begin(), g.begin() + static_cast<long>(last) + 1);
  for (std::size_t i = last + 1; i < g.size(); ++i)
    out.push_back(reflect_horizontal_line(g[last], g[i]));
  Walk w = make_walk(std::move(out));
  if (!is_bridge(w)) throw std::logic_error("fold_to_bridge: image is not a bridge");
  return w;
}

// ---- arrow ledger --------------------------------------------------------

// Bookkeeping for a multi-valued map from {0..domain_size-1} into
// {0..codomain_size-1}: if every source emits at least m arrows and
// every target receives at most M, then M |B| >= #arrows >= m |A|.
struct ArrowLedger {
  long long domain_size = 0;
  long long codomain_size = 0;
  std::map<std::pair<long long, long long>, long long> arrows;  // (a, b) -> multiplicity

  void add_arrow(long long a, long long b, long long times = 1) {
    if (a < 0 || a >= domain_size || b < 0 || b >= codomain_size)
      throw std::invalid_argument("ledger: arrow endpoint out of range");
    arrows[{a, b}] += times;
  }
  long long arrow_count() const {
    long long t = 0;
    for (const auto& [ab, c] : arrows) t += c;
    return t;
  }
  long long min_out_degree() const {
    std::map<long long, long long> out;
    for (const auto& [ab, c] : arrows) out[ab.first] += c;
    if (static_cast<long long>(out.size()) < domain_size) return 0;
    long long m = std::numeric_limits<long long>::max();
    for (const auto& [a, c] : out) m = std::min(m, c);
    return domain_size == 0 ? 0 : m;
  }
  long long max_in_degree() const {
    std::map<long long, long long> in;
    for (const auto& [ab, c] : arrows) in[ab.second] += c;
    long long M = 0;
    for (const auto& [b, c] : in) M = std::max(M, c);
    return M;
  }
};

// ceil(m |A| / M), asserting the codomain really is that large
inline BigInt ledger_bound(const ArrowLedger& ledger) {
  const long long m = ledger.min_out_degree();
  const long long M = ledger.max_in_degree();
  if (M == 0) throw std::invalid_argument("ledger_bound: no arrows");
  BigInt lhs = BigInt(M) * ledger.codomain_size;
  BigInt rhs = BigInt(m) * ledger.domain_size;
  if (lhs < rhs) throw std::logic_error("ledger_bound: codomain smaller than the arrow bound");
  return (rhs + M - 1) / M;
}

// ---- sum-map target count ------------------------------------------------

struct TmhaResult {
  std::set<long long> targets;  // sums receiving many arrows
  bool hypothesis = false;      // |S| >= a 2^{i-2}
  bool verified = false;        // hypothesis implies |targets| >= (1/8) a^2 2^{i-1}
};

// Arrows (j, k) -> j + k over ordered pairs of S; a target is kept when
// it receives at least (1/8) a^2 2^{i-2} arrows.
inline TmhaResult tmha(const std::set<long long>& S, const BigRat& a, int i) {
  if (i < 2) throw std::invalid_argument("tmha: scale must be at least 2");
  if (a <= 0 || a > 1) throw std::invalid_argument("tmha: density must lie in (0,1]");
  const long long lo = 1ll << (i - 1), hi = 1ll << i;
  for (long long s : S)
    if (s % 2 != 0 || s < lo || s > hi)
      throw std::invalid_argument("tmha: set member outside the even window");

  std::map<long long, long long> hits;
  for (long long j : S)
    for (long long k : S) ++hits[j + k];

  TmhaResult r;
  const BigRat threshold = a * a * BigRat(1ll << (i - 2)) / 8;
  for (const auto& [t, c] : hits)
    if (BigRat(c) >= threshold) r.targets.insert(t);
  r.hypothesis = BigRat(static_cast<long long>(S.size())) >= a * BigRat(1ll << (i - 2));
  r.verified = !r.hypothesis ||
               BigRat(static_cast<long long>(r.targets.size())) >= a * a * BigRat(1ll << (i - 1)) / 8;
  return r;
}

}  // namespace sapforge
