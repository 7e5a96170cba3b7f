#pragma once

// Deliberately naive second implementations used to validate the main
// engine.  No symmetry fixing, no pruning beyond self-avoidance: closed
// walks through the origin are counted rooted and oriented, then divided
// by the 2n-fold overcounting at the end.

#include <sapforge/lattice.hpp>
#include <sapforge/polygon.hpp>

#include <functional>
#include <map>
#include <set>

namespace oracle {

using namespace sapforge;

inline void closed_walk_dfs(std::vector<Pt>& walk, std::set<Pt>& used, int n,
                            long long& closed) {
  const Pt& cur = walk.back();
  if (static_cast<int>(walk.size()) == n) {
    if (l1_norm(cur) == 1) ++closed;  // the closing step returns to the origin
    return;
  }
  for (const Pt& step : {cur + kE1, cur - kE1, cur + kE2, cur - kE2}) {
    if (used.count(step)) continue;
    used.insert(step);
    walk.push_back(step);
    closed_walk_dfs(walk, used, n, closed);
    walk.pop_back();
    used.erase(step);
  }
}

// p_n by brute force: rooted oriented closed origin walks / (2n)
inline long long naive_pn(int n) {
  if (n < 4 || n % 2) return 0;
  std::vector<Pt> walk{pt(0, 0)};
  std::set<Pt> used{pt(0, 0)};
  long long closed = 0;
  closed_walk_dfs(walk, used, n, closed);
  if (closed % (2 * n) != 0) throw std::logic_error("closed-walk count not divisible by 2n");
  return closed / (2 * n);
}

// all self-avoiding walks of length exactly n from the origin
inline void saw_dfs(std::vector<Pt>& walk, std::set<Pt>& used, int n,
                    const std::function<void(const std::vector<Pt>&)>& sink) {
  if (static_cast<int>(walk.size()) == n + 1) {
    sink(walk);
    return;
  }
  const Pt cur = walk.back();
  for (const Pt& step : {cur + kE1, cur - kE1, cur + kE2, cur - kE2}) {
    if (used.count(step)) continue;
    used.insert(step);
    walk.push_back(step);
    saw_dfs(walk, used, n, sink);
    walk.pop_back();
    used.erase(step);
  }
}

inline void for_each_saw(int n, const std::function<void(const std::vector<Pt>&)>& sink) {
  std::vector<Pt> walk{pt(0, 0)};
  std::set<Pt> used{pt(0, 0)};
  saw_dfs(walk, used, n, sink);
}

inline long long naive_cn(int n) {
  long long c = 0;
  for_each_saw(n, [&](const std::vector<Pt>&) { ++c; });
  return c;
}

inline long long naive_closing_count(int n) {
  long long c = 0;
  for_each_saw(n, [&](const std::vector<Pt>& w) {
    if (w.size() >= 3 && l1_norm(w.back()) == 1) ++c;
  });
  return c;
}

// every normalized polygon of length n, via the closed-walk census
inline std::set<Polygon> naive_sap_set(int n) {
  std::set<Polygon> out;
  std::function<void(std::vector<Pt>&, std::set<Pt>&)> rec = [&](std::vector<Pt>& walk,
                                                                 std::set<Pt>& used) {
    const Pt cur = walk.back();
    if (static_cast<int>(walk.size()) == n) {
      if (l1_norm(cur) == 1) {
        std::vector<Edge> edges;
        for (std::size_t i = 0; i + 1 < walk.size(); ++i) edges.emplace_back(walk[i], walk[i + 1]);
        edges.emplace_back(walk.back(), walk.front());
        out.insert(Polygon::from_edges(edges).normalized());
      }
      return;
    }
    for (const Pt& step : {cur + kE1, cur - kE1, cur + kE2, cur - kE2}) {
      if (used.count(step)) continue;
      used.insert(step);
      walk.push_back(step);
      rec(walk, used);
      walk.pop_back();
      used.erase(step);
    }
  };
  std::vector<Pt> walk{pt(0, 0)};
  std::set<Pt> used{pt(0, 0)};
  rec(walk, used);
  return out;
}

}  // namespace oracle
