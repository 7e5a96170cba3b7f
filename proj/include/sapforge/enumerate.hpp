#pragma once

// Exact enumeration engine: depth-first backtracking counts of
// self-avoiding walks, NE-anchored polygons, bridges, returning
// half-space walks and closing walks, with deterministic parallel
// prefix splitting.

#include <sapforge/polygon.hpp>
#include <sapforge/walk.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include <atomic>
#include <cstdlib>
#include <functional>
#include <map>
#include <thread>

namespace sapforge {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

enum class Model { saw, sap, bridge, rhssaw, closing, threedge_sap };

inline const char* model_name(Model m) {
  switch (m) {
    case Model::saw: return "saw";
    case Model::sap: return "sap";
    case Model::bridge: return "bridge";
    case Model::rhssaw: return "rhssaw";
    case Model::closing: return "closing";
    case Model::threedge_sap: return "threedge-sap";
  }
  return "?";
}

inline Model model_from_name(const std::string& s) {
  for (Model m : {Model::saw, Model::sap, Model::bridge, Model::rhssaw, Model::closing,
                  Model::threedge_sap})
    if (s == model_name(m)) return m;
  throw std::invalid_argument("unknown model: " + s);
}

struct CountTable {
  Model model = Model::saw;
  int dim = 2;
  std::map<int, BigInt> counts;

  const BigInt& at(int n) const { return counts.at(n); }
};

struct EnumerationPlan {
  Model model = Model::saw;
  int dim = 2;
  int max_length = 10;
  int thread_count = 1;
  int split_depth = 6;  // prefix length at which work units are cut
};

constexpr int kMaxEnumerationLength = 40;  // hard safety cap on any model

// Global state-count budget, settable via SAPFORGE_MAX_STATES.
inline long long state_budget_limit() {
  if (const char* env = std::getenv("SAPFORGE_MAX_STATES")) {
    long long v = std::atoll(env);
    if (v > 0) return v;
  }
  return 1LL << 62;
}

class StateBudget {
 public:
  void spend(long long nodes) {
    if (total_.fetch_add(nodes, std::memory_order_relaxed) + nodes > state_budget_limit())
      exceeded_.store(true, std::memory_order_relaxed);
  }
  bool exceeded() const { return exceeded_.load(std::memory_order_relaxed); }

 private:
  std::atomic<long long> total_{0};
  std::atomic<bool> exceeded_{false};
};

// Occupancy: dense window around the origin with a hash fallback for
// anything that would fall outside it.
class OccupancyGrid {
 public:
  explicit OccupancyGrid(int radius) : radius_(radius), side_(2 * radius + 1) {
    cells_.assign(static_cast<std::size_t>(side_) * side_ * side_, 0);
  }

  bool occupied(const Pt& p) const {
    if (in_window(p)) return cells_[index(p)] != 0;
    return overflow_.count(p) != 0;
  }
  void visit(const Pt& p) {
    if (in_window(p)) cells_[index(p)] = 1;
    else overflow_.insert(p);
  }
  void unvisit(const Pt& p) {
    if (in_window(p)) cells_[index(p)] = 0;
    else overflow_.erase(p);
  }

 private:
  bool in_window(const Pt& p) const {
    return std::abs(p[0]) <= radius_ && std::abs(p[1]) <= radius_ && std::abs(p[2]) <= radius_;
  }
  std::size_t index(const Pt& p) const {
    return (static_cast<std::size_t>(p[2] + radius_) * side_ + (p[1] + radius_)) * side_ +
           (p[0] + radius_);
  }

  int radius_, side_;
  std::vector<std::uint8_t> cells_;
  std::unordered_set<Pt, PtHash> overflow_;
};

namespace detail {

inline int neighbours(const Pt& p, int dim, Pt out[6]) {
  out[0] = p + kE1;
  out[1] = p - kE1;
  out[2] = p + kE2;
  out[3] = p - kE2;
  if (dim == 2) return 4;
  out[4] = p + kE3;
  out[5] = p - kE3;
  return 6;
}

// One independent work unit: a fixed self-avoiding prefix to continue.
struct Prefix {
  std::vector<Pt> vertices;
};

using Counts = std::vector<unsigned long long>;  // index = length

inline void add_counts(Counts& into, const Counts& from) {
  for (std::size_t i = 0; i < from.size(); ++i) into[i] += from[i];
}

// Generic walk DFS.  Policy supplies:
//   bool admit(const Pt& next, const std::vector<Pt>& walk)   - constraint
//   void record(const std::vector<Pt>& walk, Counts& counts)  - per node
//   bool extend(const std::vector<Pt>& walk)                  - keep going?
template <typename Policy>
void walk_dfs(Policy& pol, std::vector<Pt>& walk, OccupancyGrid& grid, int dim, int max_len,
              Counts& counts, StateBudget& budget, long long& local_nodes) {
  if (static_cast<int>(walk.size()) > max_len) return;
  if (++local_nodes >= 4096) {
    budget.spend(local_nodes);
    local_nodes = 0;
    if (budget.exceeded()) throw std::runtime_error("enumeration state cap exceeded");
  }
  pol.record(walk, counts);
  if (static_cast<int>(walk.size()) == max_len || !pol.extend(walk)) return;
  Pt nb[6];
  int deg = neighbours(walk.back(), dim, nb);
  for (int i = 0; i < deg; ++i) {
    if (grid.occupied(nb[i]) || !pol.admit(nb[i], walk)) continue;
    grid.visit(nb[i]);
    walk.push_back(nb[i]);
    walk_dfs(pol, walk, grid, dim, max_len, counts, budget, local_nodes);
    walk.pop_back();
    grid.unvisit(nb[i]);
  }
}

// Split the walk tree at a prefix depth, run units across threads with
// an associative in-order reduction.  `make_policy()` builds a fresh
// policy per worker (policies may hold mutable scratch).
template <typename MakePolicy>
Counts parallel_walk_count(MakePolicy make_policy, const std::vector<Pt>& seed, int dim,
                           int max_len, int threads, int split_depth) {
  // `max_len` counts vertices here; lengths are walk.size() semantics of
  // the policy's record().
  StateBudget budget;
  int cut = static_cast<int>(seed.size()) + std::max(split_depth, 0);
  Counts root_counts(static_cast<std::size_t>(max_len) + 2, 0);

  if (cut >= max_len) {  // tree too shallow to split: plain serial run
    auto pol = make_policy();
    OccupancyGrid grid(max_len + 2);
    std::vector<Pt> walk = seed;
    for (const Pt& p : walk) grid.visit(p);
    long long nodes = 0;
    walk_dfs(pol, walk, grid, dim, max_len, root_counts, budget, nodes);
    return root_counts;
  }

  // root pass: record everything up to the cut and collect the cut prefixes
  std::vector<Prefix> units;
  {
    struct RootPolicy {
      decltype(make_policy()) inner;
      int cut;
      std::vector<Prefix>* units;
      bool admit(const Pt& n, const std::vector<Pt>& w) { return inner.admit(n, w); }
      void record(const std::vector<Pt>& w, Counts& c) {
        if (static_cast<int>(w.size()) < cut) inner.record(w, c);
        else units->push_back(Prefix{w});
      }
      bool extend(const std::vector<Pt>& w) {
        return static_cast<int>(w.size()) < cut && inner.extend(w);
      }
    } root{make_policy(), cut, &units};
    OccupancyGrid grid(max_len + 2);
    std::vector<Pt> walk = seed;
    for (const Pt& p : walk) grid.visit(p);
    long long nodes = 0;
    walk_dfs(root, walk, grid, dim, max_len, root_counts, budget, nodes);
    budget.spend(nodes);
  }

  if (units.empty()) return root_counts;

  std::vector<Counts> unit_counts(units.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  auto worker = [&] {
    try {
      OccupancyGrid grid(max_len + 2);
      auto pol = make_policy();
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= units.size() || failed.load(std::memory_order_relaxed)) break;
        Counts local(static_cast<std::size_t>(max_len) + 2, 0);
        std::vector<Pt> walk = units[i].vertices;
        for (const Pt& p : walk) grid.visit(p);
        long long nodes = 0;
        walk_dfs(pol, walk, grid, dim, max_len, local, budget, nodes);
        budget.spend(nodes);
        for (const Pt& p : walk) grid.unvisit(p);
        unit_counts[i] = std::move(local);
      }
    } catch (...) {
      failed.store(true, std::memory_order_relaxed);
    }
  };
  int nthreads = std::max(1, threads);
  std::vector<std::thread> pool;
  for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failed.load() || budget.exceeded())
    throw std::runtime_error("enumeration state cap exceeded");

  for (const Counts& c : unit_counts) add_counts(root_counts, c);  // fixed order
  return root_counts;
}

// ---- model policies -----------------------------------------------------

// every walk node of length >= 1 counts; length = edges = size - 1
struct SawPolicy {
  bool admit(const Pt&, const std::vector<Pt>&) { return true; }
  void record(const std::vector<Pt>& w, Counts& c) {
    if (w.size() >= 2) c[w.size() - 1] += 1;
  }
  bool extend(const std::vector<Pt>&) { return true; }
};

// NE-anchored polygon tour: seed (0,0) -> (-1,0); no vertex with y > 0
// or (y = 0, x > 0); the tour closes on arrival at (0,-1).
struct SapPolicy {
  static bool in_cone(const Pt& p) { return y(p) < 0 || (y(p) == 0 && x(p) < 0); }
  bool admit(const Pt& n, const std::vector<Pt>&) { return in_cone(n) || n == pt(0, -1); }
  void record(const std::vector<Pt>& w, Counts& c) {
    if (w.back() == pt(0, -1) && w.size() >= 4) c[w.size()] += 1;  // + implicit closing edge
  }
  bool extend(const std::vector<Pt>& w) { return w.back() != pt(0, -1); }
};

// closing walks: endpoint at distance one from the origin.  The
// length-1 walk is excluded: its closing edge re-traverses the walk
// itself, so no polygon is formed.
struct ClosingPolicy {
  bool admit(const Pt&, const std::vector<Pt>&) { return true; }
  void record(const std::vector<Pt>& w, Counts& c) {
    if (w.size() >= 3 && l1_norm(w.back()) == 1) c[w.size() - 1] += 1;
  }
  bool extend(const std::vector<Pt>&) { return true; }
};

// bridges (downward, e2): y <= 0 and the end strictly below everything
struct BridgePolicy {
  bool admit(const Pt& n, const std::vector<Pt>&) { return y(n) <= 0; }
  void record(const std::vector<Pt>& w, Counts& c) {
    if (w.size() < 2) return;
    int yb = y(w.back());
    for (std::size_t i = 0; i + 1 < w.size(); ++i)
      if (y(w[i]) <= yb) return;
    c[w.size() - 1] += 1;
  }
  bool extend(const std::vector<Pt>&) { return true; }
};

// returning half-space walks (y <= 0, single axis touch after the last
// minimal-y visit, at the end)
struct RhsPolicy {
  bool admit(const Pt& n, const std::vector<Pt>&) { return y(n) <= 0; }
  void record(const std::vector<Pt>& w, Counts& c) {
    if (w.size() < 2 || y(w.back()) != 0) return;
    int ymin = 0;
    for (const Pt& p : w) ymin = std::min(ymin, y(p));
    std::size_t last_min = 0;
    for (std::size_t i = 0; i < w.size(); ++i)
      if (y(w[i]) == ymin) last_min = i;
    int axis = 0;
    for (std::size_t i = last_min + 1; i < w.size(); ++i)
      if (y(w[i]) == 0) ++axis;
    if (axis == 1) c[w.size() - 1] += 1;
  }
  bool extend(const std::vector<Pt>&) { return true; }
};

}  // namespace detail

// ---- public counting ----------------------------------------------------

inline CountTable count(const EnumerationPlan& plan) {
  if (plan.max_length < 1 || plan.max_length > kMaxEnumerationLength)
    throw std::invalid_argument("count: max_length outside the safety cap");
  if (plan.dim != 2 && plan.dim != 3) throw std::invalid_argument("count: dim must be 2 or 3");
  if (plan.model != Model::saw && plan.dim != 2)
    throw std::invalid_argument("count: model requires dim = 2");

  CountTable table;
  table.model = plan.model;
  table.dim = plan.dim;

  using namespace detail;
  Counts c;
  std::vector<Pt> origin{pt(0, 0)};
  switch (plan.model) {
    case Model::saw:
      c = parallel_walk_count([] { return SawPolicy{}; }, origin, plan.dim,
                              plan.max_length + 1, plan.thread_count, plan.split_depth);
      for (int n = 1; n <= plan.max_length; ++n) table.counts[n] = c[n];
      break;
    case Model::sap:
      c = parallel_walk_count([] { return SapPolicy{}; }, {pt(0, 0), pt(-1, 0)}, 2,
                              plan.max_length, plan.thread_count, plan.split_depth);
      for (int n = 4; n <= plan.max_length; n += 2) table.counts[n] = c[n];
      break;
    case Model::closing:
      c = parallel_walk_count([] { return ClosingPolicy{}; }, origin, 2, plan.max_length + 1,
                              plan.thread_count, plan.split_depth);
      for (int n = 1; n <= plan.max_length; ++n) table.counts[n] = c[n];
      break;
    case Model::bridge:
      c = parallel_walk_count([] { return BridgePolicy{}; }, origin, 2, plan.max_length + 1,
                              plan.thread_count, plan.split_depth);
      for (int n = 1; n <= plan.max_length; ++n) table.counts[n] = c[n];
      break;
    case Model::rhssaw:
      c = parallel_walk_count([] { return RhsPolicy{}; }, origin, 2, plan.max_length + 1,
                              plan.thread_count, plan.split_depth);
      for (int n = 1; n <= plan.max_length; ++n) table.counts[n] = c[n];
      break;
    case Model::threedge_sap:
      throw std::invalid_argument("count: threedge-sap is served by the 3-edge module");
  }
  return table;
}

// Stream every normalized polygon of length <= max_length in canonical
// depth-first tour order (single-threaded, deterministic).
inline void stream_sap(int max_length, const std::function<void(const Polygon&)>& sink) {
  if (max_length < 4 || max_length > kMaxEnumerationLength)
    throw std::invalid_argument("stream_sap: bad max_length");
  struct StreamPolicy {
    const std::function<void(const Polygon&)>* sink;
    bool admit(const Pt& n, const std::vector<Pt>&) {
      return detail::SapPolicy::in_cone(n) || n == pt(0, -1);
    }
    void record(const std::vector<Pt>& w, detail::Counts&) {
      if (w.back() == pt(0, -1) && w.size() >= 4) (*sink)(Polygon::from_tour(w));
    }
    bool extend(const std::vector<Pt>& w) { return w.back() != pt(0, -1); }
  } pol{&sink};

  StateBudget budget;
  OccupancyGrid grid(max_length + 2);
  std::vector<Pt> walk{pt(0, 0), pt(-1, 0)};
  for (const Pt& p : walk) grid.visit(p);
  detail::Counts c(static_cast<std::size_t>(max_length) + 2, 0);
  long long nodes = 0;
  detail::walk_dfs(pol, walk, grid, 2, max_length, c, budget, nodes);
}

inline std::vector<Polygon> all_polygons(int length) {
  std::vector<Polygon> out;
  stream_sap(length, [&](const Polygon& p) {
    if (p.length() == length) out.push_back(p);
  });
  return out;
}

// ---- derived exact quantities -------------------------------------------

// sum over SAW_n of |endpoint|^2, per length (for the displacement table)
struct SawMoments {
  std::map<int, BigInt> counts;
  std::map<int, BigInt> sum_sq;
};

inline SawMoments saw_moments(int max_length, int dim = 2, int threads = 1) {
  struct MomentPolicy {
    bool admit(const Pt&, const std::vector<Pt>&) { return true; }
    void record(const std::vector<Pt>& w, detail::Counts& c) {
      if (w.size() < 2) return;
      std::size_t n = w.size() - 1;
      c[n] += 1;
      c[n + 20] += static_cast<unsigned long long>(norm_sq(w.back()));  // moment lane
    }
    bool extend(const std::vector<Pt>&) { return true; }
  };
  // lanes [1..19] hold counts, [21..39] endpoint second moments
  if (max_length > 19) throw std::invalid_argument("saw_moments: max_length above moment lanes");
  (void)threads;  // moment pass is cheap; kept serial for a fixed bucket layout
  detail::Counts c(64, 0);
  StateBudget budget;
  OccupancyGrid grid(max_length + 2);
  std::vector<Pt> walk{pt(0, 0)};
  grid.visit(pt(0, 0));
  MomentPolicy pol;
  long long nodes = 0;
  detail::walk_dfs(pol, walk, grid, dim, max_length + 1, c, budget, nodes);
  SawMoments m;
  for (int n = 1; n <= max_length; ++n) {
    m.counts[n] = c[n];
    m.sum_sq[n] = c[n + 20];
  }
  return m;
}

inline BigRat mean_square_displacement(int n, int dim = 2) {
  SawMoments m = saw_moments(n, dim);
  return BigRat(m.sum_sq.at(n), m.counts.at(n));
}

struct ClosingProbability {
  BigRat census;   // #closing walks of length n / c_n
  BigRat formula;  // 2 (n+1) p_{n+1} / c_n
};

inline ClosingProbability closing_probability(int n, int threads = 1) {
  if (n % 2 == 0) throw std::invalid_argument("closing_probability: n must be odd");
  EnumerationPlan saw_plan{Model::saw, 2, n, threads};
  EnumerationPlan close_plan{Model::closing, 2, n, threads};
  EnumerationPlan sap_plan{Model::sap, 2, n + 1, threads};
  BigInt cn = count(saw_plan).at(n);
  BigInt closers = count(close_plan).at(n);
  BigInt pn1 = (n >= 3) ? count(sap_plan).at(n + 1) : BigInt(0);
  ClosingProbability out;
  out.census = BigRat(closers, cn);
  out.formula = BigRat(BigInt(2) * (n + 1) * pn1, cn);
  return out;
}

}  // namespace sapforge
