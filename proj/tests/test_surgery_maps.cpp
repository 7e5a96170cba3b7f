#include <doctest.h>
#include <sapforge/enumerate.hpp>
#include <sapforge/madras_join.hpp>
#include <sapforge/surgery_maps.hpp>

#include "oracle.hpp"

#include <random>

using namespace sapforge;

namespace {

Polygon unit_square() {
  return Polygon::from_tour({pt(0, 0), pt(-1, 0), pt(-1, -1), pt(0, -1)});
}

// every kappa with |kappa| <= cap over 1..r
std::vector<std::set<int>> small_subsets(int r, int cap) {
  std::vector<std::set<int>> out{{}};
  if (cap >= 1)
    for (int a = 1; a <= r; ++a) {
      out.push_back({a});
      if (cap >= 2)
        for (int b = a + 1; b <= r; ++b) out.push_back({a, b});
    }
  return out;
}

BigInt binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  BigInt v = 1;
  for (int i = 1; i <= k; ++i) v = v * (n - k + i) / i;
  return v;
}

}  // namespace

TEST_CASE("reflect_split: unit square example and endpoint key") {
  Walk w = reflect_split(unit_square());
  CHECK(w.length() == 4);
  CHECK(w.front() == pt(0, 0));
  CHECK(is_returning_half_space(w));
  CHECK(x(w.back()) == 2 * x(unit_square().corner(Compass::ES)));

  for (int n = 4; n <= 12; n += 2)
    for (const Polygon& phi : all_polygons(n)) {
      Walk img = reflect_split(phi);
      CHECK(img.length() == n);
      CHECK(is_returning_half_space(img));
      CHECK(x(img.back()) == 2 * x(phi.corner(Compass::ES)));
      CHECK(y(img.back()) == 0);
    }
}

TEST_CASE("reflect_split is injective on each census") {
  for (int n = 4; n <= 12; n += 2) {
    std::set<std::vector<Pt>> images;
    long long total = 0;
    for (const Polygon& phi : all_polygons(n)) {
      images.insert(reflect_split(phi).vertices);
      ++total;
    }
    CHECK(static_cast<long long>(images.size()) == total);
  }
}

TEST_CASE("detour surgery: length law, edge discipline, intersection identity") {
  for (int n = 4; n <= 10; n += 2)
    for (const Polygon& phi : all_polygons(n)) {
      const std::vector<Plaquette> gj = global_join_plaquettes(phi);
      const int r = static_cast<int>(gj.size());
      const Pt es = phi.corner(Compass::ES);
      const int split = phi.tour_index(es);

      std::set<Edge> first_arc;  // edges of the pre-ES arc
      for (int i = 0; i < split; ++i) first_arc.insert(Edge(phi.tour()[i], phi.tour()[i + 1]));

      for (const std::set<int>& kappa : small_subsets(r, 2)) {
        Walk img = s_kappa(phi, kappa);
        CHECK(img.length() == n + 2 * static_cast<int>(kappa.size()));
        if (kappa.empty()) CHECK(img == reflect_split(phi));
        CHECK(is_returning_half_space(img));

        // no edge is ever traversed twice
        std::set<Edge> traversed;
        for (std::size_t i = 0; i + 1 < img.vertices.size(); ++i)
          CHECK(traversed.insert(Edge(img.vertices[i], img.vertices[i + 1])).second);

        // unreflect the suffix: the detoured arc in original coordinates
        std::set<Edge> second_arc;
        for (std::size_t i = static_cast<std::size_t>(split); i + 1 < img.vertices.size(); ++i)
          second_arc.insert(Edge(reflect_vertical_line(es, img.vertices[i]),
                                 reflect_vertical_line(es, img.vertices[i + 1])));

        // arcs overlap exactly in one edge per selected plaquette
        std::set<Edge> overlap, expected;
        for (const Edge& e : second_arc)
          if (first_arc.count(e)) overlap.insert(e);
        for (int j : kappa) {
          int hits = 0;
          for (const Edge& h : gj[static_cast<std::size_t>(j - 1)].horizontal_edges())
            if (first_arc.count(h)) expected.insert(h), ++hits;
          CHECK(hits == 1);
        }
        CHECK(overlap == expected);
      }
      CHECK_THROWS_AS(s_kappa(phi, {r + 1}), std::invalid_argument);
    }
}

TEST_CASE("each arc of the tour crosses every global join plaquette exactly once") {
  for (int n = 4; n <= 12; n += 2)
    for (const Polygon& phi : all_polygons(n)) {
      const int split = phi.tour_index(phi.corner(Compass::ES));
      std::set<Edge> first_arc;
      for (int i = 0; i < split; ++i) first_arc.insert(Edge(phi.tour()[i], phi.tour()[i + 1]));
      for (const Plaquette& P : global_join_plaquettes(phi)) {
        int in_first = 0;
        for (const Edge& h : P.horizontal_edges())
          if (first_arc.count(h)) ++in_first;
        CHECK(in_first == 1);  // the other horizontal lies on the post-ES arc
      }
    }
}

TEST_CASE("reconstruct inverts the detour surgery") {
  for (int n = 4; n <= 10; n += 2)
    for (const Polygon& phi : all_polygons(n)) {
      const int r = static_cast<int>(global_join_plaquettes(phi).size());
      for (const std::set<int>& kappa : small_subsets(r, 2)) {
        Walk img = s_kappa(phi, kappa);
        Polygon back = reconstruct(img, static_cast<int>(kappa.size()));
        CHECK(back == phi);
      }
    }
}

TEST_CASE("adjacent selected plaquettes share a vertical yet still invert") {
  // two side-by-side global join plaquettes: their detours both use the
  // shared vertical edge, so the image walk repeats that edge; the
  // doubled horizontal edges still identify the detours uniquely
  Polygon phi = Polygon::from_tour({pt(0, 0), pt(-1, 0), pt(-1, -1), pt(-1, -2), pt(0, -2),
                                    pt(1, -2), pt(2, -2), pt(3, -2), pt(3, -1), pt(2, -1),
                                    pt(1, -1), pt(0, -1)});
  auto gj = global_join_plaquettes(phi);
  REQUIRE(gj.size() == 2);
  CHECK(gj[0].anchor + kE1 == gj[1].anchor);  // truly adjacent
  Walk img = s_kappa(phi, {1, 2});
  std::map<Edge, int> mult;
  for (std::size_t i = 0; i + 1 < img.vertices.size(); ++i)
    ++mult[Edge(img.vertices[i], img.vertices[i + 1])];
  int doubled_vertical = 0;
  for (const auto& [e, m] : mult)
    if (m == 2 && e.axis() == 1) ++doubled_vertical;
  CHECK(doubled_vertical == 1);
  CHECK(reconstruct(img, 2) == phi);
}

TEST_CASE("reconstruct rejects corrupted input") {
  Polygon phi = all_polygons(8).front();
  Walk img = reflect_split(phi);
  CHECK_THROWS_AS(reconstruct(img, 1), std::runtime_error);  // wrong detour count
  Walk shifted = translate_walk(img, pt(1, 0));
  CHECK_THROWS_AS(reconstruct(shifted, 0), std::runtime_error);  // lost the origin
  std::vector<Pt> cut(img.vertices.begin(), img.vertices.end() - 1);
  CHECK_THROWS_AS(reconstruct(make_walk(cut), 0), std::runtime_error);
}

TEST_CASE("fold_to_bridge: example, bridge property, injectivity, count bound") {
  Walk gamma = make_walk({pt(0, 0), pt(0, -1), pt(1, -1), pt(1, 0)});
  Walk folded = fold_to_bridge(gamma);
  CHECK(is_bridge(folded));
  CHECK(folded.back() == pt(1, -2));

  CHECK_THROWS_AS(fold_to_bridge(make_walk({pt(0, 0), pt(1, 0)})), std::invalid_argument);

  CountTable bridges = count({Model::bridge, 2, 10, 1});
  CountTable rhs = count({Model::rhssaw, 2, 10, 1});
  for (int n = 1; n <= 10; ++n) {
    std::set<std::vector<Pt>> images;
    long long members = 0;
    oracle::for_each_saw(n, [&](const std::vector<Pt>& v) {
      for (const Pt& p : v)
        if (y(p) > 0) return;
      Walk w = make_walk(v);
      if (!is_returning_half_space(w)) return;
      ++members;
      Walk b = fold_to_bridge(w);
      CHECK(is_bridge(b));
      CHECK(images.insert(b.vertices).second);  // injective
    });
    CHECK(members == rhs.at(n));
    CHECK(rhs.at(n) <= bridges.at(n));  // the injection certifies the count bound
  }
}

TEST_CASE("arrow ledger arithmetic") {
  ArrowLedger l;
  l.domain_size = 3;
  l.codomain_size = 2;
  l.add_arrow(0, 0, 2);
  l.add_arrow(1, 0, 1);
  l.add_arrow(1, 1, 1);
  l.add_arrow(2, 1, 2);
  CHECK(l.min_out_degree() == 2);
  CHECK(l.max_in_degree() == 3);
  CHECK(ledger_bound(l) == 2);  // ceil(2*3/3)

  ArrowLedger inj;  // m = M = 1 forces |B| >= |A|
  inj.domain_size = 4;
  inj.codomain_size = 4;
  for (long long i = 0; i < 4; ++i) inj.add_arrow(i, 3 - i);
  CHECK(ledger_bound(inj) == 4);

  ArrowLedger empty;
  empty.domain_size = 1;
  empty.codomain_size = 1;
  CHECK_THROWS_AS(ledger_bound(empty), std::invalid_argument);

  ArrowLedger tight;  // codomain too small for the arrows
  tight.domain_size = 4;
  tight.codomain_size = 1;
  for (long long i = 0; i < 4; ++i) tight.add_arrow(i, 0, 1);
  tight.codomain_size = 1;
  CHECK(tight.max_in_degree() == 4);
  CHECK(ledger_bound(tight) == 1);  // 4*1/4 = 1 fits
}

TEST_CASE("joining ledger with exact counts at combined length 16") {
  std::vector<Polygon> lefts, rights;
  for (const Polygon& p : all_polygons(8)) {
    LeftRight c = classify(p);
    if (c.is_left) lefts.push_back(p);
    if (c.is_right) rights.push_back(p);
  }
  ArrowLedger ledger;
  ledger.domain_size = static_cast<long long>(lefts.size() * rights.size());
  std::map<Polygon, long long> intern;
  std::vector<std::tuple<long long, long long>> pending;
  long long a_id = 0;
  for (const Polygon& a : lefts)
    for (const Polygon& b : rights) {
      for (const Pt& u : strong_join_offsets(a, b)) {
        Polygon joined = madras_join(a, b.translated(u)).joined.normalized();
        auto [it, fresh] = intern.emplace(joined, static_cast<long long>(intern.size()));
        pending.emplace_back(a_id, it->second);
      }
      ++a_id;
    }
  ledger.codomain_size = static_cast<long long>(intern.size());
  for (auto [a, b] : pending) ledger.add_arrow(a, b);
  CHECK(ledger.min_out_degree() >= 1);  // every pair admits a strong join
  BigInt bound = ledger_bound(ledger);  // also certifies M|B| >= m|A|
  CHECK(bound >= 1);
  CHECK(BigInt(ledger.codomain_size) >= bound);
}

TEST_CASE("binomial monotonicity used in place of the implicit constant") {
  for (int n = 4; n <= 12; n += 2)
    for (const Polygon& phi : all_polygons(n)) {
      const int g = static_cast<int>(global_join_plaquettes(phi).size());
      for (int k = 1; k <= g; ++k) {
        int take = k / 3;  // a fixed fractional selection size
        CHECK(binom(g, take) >= binom(k, take));
      }
    }
}

TEST_CASE("sum-map targets hit by many arrows") {
  // the full even window always satisfies the conclusion
  for (int i = 5; i <= 10; ++i) {
    std::set<long long> full;
    for (long long s = 1ll << (i - 1); s <= 1ll << i; s += 2) full.insert(s);
    TmhaResult r = tmha(full, BigRat(1), i);
    CHECK(r.hypothesis);
    CHECK(r.verified);
    CHECK(!r.targets.empty());
  }

  // empty set: vacuous
  TmhaResult e = tmha({}, BigRat(1, 2), 6);
  CHECK(e.targets.empty());
  CHECK(!e.hypothesis);
  CHECK(e.verified);

  // random subsets: whenever the density hypothesis holds, so does the bound
  std::mt19937 rng(2026);
  for (int i = 5; i <= 10; ++i)
    for (int trial = 0; trial < 40; ++trial) {
      std::set<long long> S;
      for (long long s = 1ll << (i - 1); s <= 1ll << i; ++s)
        if (s % 2 == 0 && rng() % 4 != 0) S.insert(s);
      TmhaResult r = tmha(S, BigRat(1, 2), i);
      CHECK(r.verified);
    }

  CHECK_THROWS_AS(tmha({3}, BigRat(1, 2), 2), std::invalid_argument);
  CHECK_THROWS_AS(tmha({}, BigRat(2), 5), std::invalid_argument);
}
