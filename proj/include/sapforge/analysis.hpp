#pragma once

// Analytics over exact count tables: certified growth-constant lower
// bounds, exponent tables, join-plaquette frequency histograms, high
// polygon number membership and the dyadic propagation arithmetic.

#include <sapforge/enumerate.hpp>
#include <sapforge/io.hpp>
#include <sapforge/polygon.hpp>

#include <cmath>
#include <iomanip>
#include <sstream>

namespace sapforge {

// ---- exact roots ---------------------------------------------------------

inline BigInt bi_pow(const BigInt& base, long long e) {
  BigInt out = 1, b = base;
  for (long long k = e; k > 0; k >>= 1) {
    if (k & 1) out *= b;
    b *= b;
  }
  return out;
}

// largest integer a with a^n <= v
inline BigInt floor_nth_root(const BigInt& v, int n) {
  if (v < 0 || n < 1) throw std::invalid_argument("floor_nth_root: bad input");
  BigInt lo = 0, hi = 1;
  while (bi_pow(hi, n) <= v) hi <<= 1;
  while (lo + 1 < hi) {
    BigInt mid = (lo + hi) >> 1;
    if (bi_pow(mid, n) <= v) lo = mid;
    else hi = mid;
  }
  return lo;
}

constexpr long long kRootScale = 10000;  // certified roots as multiples of 1e-4

// largest q = a/kRootScale with q^n <= v (v a non-negative rational)
inline BigRat floor_nth_root_rat(const BigRat& v, int n) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  // a^n <= v * scale^n  with everything over a common denominator
  BigInt num = numerator(v) * bi_pow(BigInt(kRootScale), n);
  BigInt den = denominator(v);
  return BigRat(floor_nth_root(num / den, n), BigInt(kRootScale));
}

// ---- growth-constant lower bounds ----------------------------------------

// max over even n of (p_n/(d-1))^{1/n}: each term certifies mu >= term
// because p_n <= (d-1) mu^n
inline BigRat mu_lower_bound(const CountTable& p) {
  if (p.counts.empty()) throw std::invalid_argument("mu_lower_bound: empty count table");
  const int d = p.dim;
  BigRat best = 0;
  for (const auto& [n, pn] : p.counts) {
    if (n % 2 != 0 || pn <= 0) continue;
    best = std::max(best, floor_nth_root_rat(BigRat(pn, d - 1), n));
  }
  return best;
}

// max over n of b_n^{1/n}: bridges are supermultiplicative, so each
// term certifies mu >= term
inline BigRat bridge_mu_lower_bound(const CountTable& b) {
  if (b.counts.empty()) throw std::invalid_argument("bridge_mu_lower_bound: empty count table");
  BigRat best = 0;
  for (const auto& [n, bn] : b.counts)
    if (bn > 0) best = std::max(best, floor_nth_root_rat(BigRat(bn), n));
  return best;
}

struct MuBound {
  BigRat value;
  std::string provenance;
  int witness_n = 0;
};

// best certified bound from the polygon and bridge routes together
inline MuBound certified_growth_lower_bound(const CountTable& p, const CountTable& bridges) {
  MuBound out;
  out.value = 0;
  const int d = p.dim;
  for (const auto& [n, pn] : p.counts) {
    if (n % 2 != 0 || pn <= 0) continue;
    BigRat q = floor_nth_root_rat(BigRat(pn, d - 1), n);
    if (q > out.value) out = {q, "polygon route: (p_n/(d-1))^(1/n)", n};
  }
  for (const auto& [n, bn] : bridges.counts) {
    if (bn <= 0) continue;
    BigRat q = floor_nth_root_rat(BigRat(bn), n);
    if (q > out.value) out = {q, "bridge route: b_n^(1/n) via supermultiplicativity", n};
  }
  if (out.witness_n == 0) throw std::invalid_argument("certified_growth_lower_bound: no usable rows");
  return out;
}

// ---- exponent tables -----------------------------------------------------

struct ExponentRow {
  int n = 0;
  double theta = std::numeric_limits<double>::quiet_NaN();  // p_n = n^{-theta} mu_ref^n
  double xi = std::numeric_limits<double>::quiet_NaN();     // c_n = n^{xi} mu_ref^n
  BigRat mu_lower;                                          // certified bound from rows <= n
  bool has_closing = false;
  BigRat closing_prob;  // 2(n+1) p_{n+1} / c_n at odd n
  bool has_msd = false;
  BigRat msd;
};

struct ExponentTable {
  double mu_ref = 0;
  std::string mu_provenance;
  std::map<int, ExponentRow> rows;
};

inline ExponentTable exponent_tables(const CountTable& p, const CountTable& c, double mu_ref,
                                     const std::string& mu_provenance,
                                     const SawMoments* moments = nullptr) {
  if (!(mu_ref > 0)) throw std::invalid_argument("exponent_tables: mu_ref must be positive");
  ExponentTable table;
  table.mu_ref = mu_ref;
  table.mu_provenance = mu_provenance;

  std::set<int> ns;
  for (const auto& [n, v] : p.counts) ns.insert(n);
  for (const auto& [n, v] : c.counts) ns.insert(n);

  const int d = p.dim;
  BigRat running = 0;
  for (int n : ns) {
    ExponentRow row;
    row.n = n;
    const double logn = std::log(static_cast<double>(n));
    auto itp = p.counts.find(n);
    if (itp != p.counts.end() && itp->second > 0) {
      if (n % 2 == 0) running = std::max(running, floor_nth_root_rat(BigRat(itp->second, d - 1), n));
      if (n > 1)
        row.theta =
            (n * std::log(mu_ref) - std::log(static_cast<double>(itp->second))) / logn;
    }
    auto itc = c.counts.find(n);
    if (itc != c.counts.end() && itc->second > 0 && n > 1)
      row.xi = (std::log(static_cast<double>(itc->second)) - n * std::log(mu_ref)) / logn;
    row.mu_lower = running;
    if (n % 2 == 1 && itc != c.counts.end()) {
      auto itp1 = p.counts.find(n + 1);
      BigInt pn1 = (itp1 != p.counts.end()) ? itp1->second : BigInt(0);
      row.closing_prob = BigRat(BigInt(2) * (n + 1) * pn1, itc->second);
      row.has_closing = true;
    }
    if (moments && moments->counts.count(n)) {
      row.msd = BigRat(moments->sum_sq.at(n), moments->counts.at(n));
      row.has_msd = true;
    }
    table.rows[n] = std::move(row);
  }
  return table;
}

// ---- join-plaquette frequency --------------------------------------------

struct GjFrequency {
  int n = 0;
  std::map<int, long long> histogram;  // |GJ_phi| -> #polygons
  long long total = 0;
  std::map<int, BigRat> tail_ratio;  // k -> #{|GJ| >= k} / p_n
};

inline GjFrequency gj_frequency(int n) {
  GjFrequency out;
  out.n = n;
  stream_sap(n, [&](const Polygon& phi) {
    if (phi.length() != n) return;
    ++out.histogram[static_cast<int>(global_join_plaquettes(phi).size())];
    ++out.total;
  });
  if (out.total == 0) return out;
  int kmax = out.histogram.empty() ? 0 : out.histogram.rbegin()->first;
  long long tail = 0;
  std::map<int, long long> tails;
  for (int k = kmax; k >= 0; --k) {
    auto it = out.histogram.find(k);
    if (it != out.histogram.end()) tail += it->second;
    tails[k] = tail;
  }
  for (const auto& [k, t] : tails) out.tail_ratio[k] = BigRat(t, out.total);
  return out;
}

// ---- high polygon number indices -----------------------------------------

// p_n >= n^{-zeta} mu_ref^n, compared in exact integers
inline bool hpn_member(const BigInt& pn, int n, const BigRat& zeta, const BigRat& mu_ref) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  if (!(mu_ref > 0)) throw std::invalid_argument("hpn_member: mu_ref must be positive");
  if (pn <= 0) return false;
  BigInt zn = numerator(zeta), zd = denominator(zeta);  // zd > 0
  BigInt mn = numerator(mu_ref), md = denominator(mu_ref);
  long long e = static_cast<long long>(zd) * n;
  // p_n^zd * n^zn * md^(n zd) >= mn^(n zd), with n^zn moved right if zn < 0
  BigInt lhs = bi_pow(pn, static_cast<long long>(zd)) * bi_pow(md, e);
  BigInt rhs = bi_pow(mn, e);
  if (zn >= 0) lhs *= bi_pow(BigInt(n), static_cast<long long>(zn));
  else rhs *= bi_pow(BigInt(n), -static_cast<long long>(zn));
  return lhs >= rhs;
}

struct HpnReport {
  BigRat zeta;
  BigRat mu_ref;
  std::vector<int> members;
  struct Block {
    int i = 0;           // block (2^{i-1}, 2^i]
    long long members = 0;
    long long evens = 0;  // even indices of the block present in the table
    bool complete = false;
  };
  std::vector<Block> blocks;
};

inline HpnReport hpn_report(const CountTable& p, const BigRat& zeta, const BigRat& mu_ref) {
  HpnReport out;
  out.zeta = zeta;
  out.mu_ref = mu_ref;
  std::set<int> present;
  int nmax = 0;
  for (const auto& [n, pn] : p.counts) {
    if (n % 2 != 0) continue;
    present.insert(n);
    nmax = std::max(nmax, n);
    if (hpn_member(pn, n, zeta, mu_ref)) out.members.push_back(n);
  }
  for (int i = 2;; ++i) {  // blocks (2^{i-1}, 2^i]
    int lo = (1 << (i - 1)) + 1, hi = 1 << i;
    if (lo > nmax) break;
    HpnReport::Block b;
    b.i = i;
    for (int n = lo + (lo % 2); n <= hi; n += 2) {
      if (!present.count(n)) continue;
      ++b.evens;
      if (std::binary_search(out.members.begin(), out.members.end(), n)) ++b.members;
    }
    b.complete = hi <= nmax;
    out.blocks.push_back(b);
  }
  return out;
}

// ---- dyadic propagation arithmetic ---------------------------------------

// h_0 = a, h_{k+1} = h_k^2 / 8; closed form 8^{1-2^k} a^{2^k}
inline std::vector<BigRat> h_cascade(const BigRat& a, int kmax) {
  if (!(a > 0) || a > 1) throw std::invalid_argument("h_cascade: a must lie in (0,1]");
  std::vector<BigRat> h{a};
  for (int k = 1; k <= kmax; ++k) h.push_back(h.back() * h.back() / 8);
  return h;
}

// the explicit threshold scale, with the existential constant exposed
inline double i0_threshold(double phi, double C1 = 1.0) {
  if (!(phi > 0) || !(C1 > 0)) throw std::invalid_argument("i0_threshold: bad parameters");
  const double log2 = std::log(2.0);
  double second = (18 + 2 / log2 * std::log(C1)) / phi;
  const double pi = std::acos(-1.0);
  double third = std::log(2 * pi) / (2 * log2) +
                 (4 / phi + 1.5) * std::log(4 / phi + 1) / log2;
  return std::max({6.0, second, third});
}

inline double f_delta_a(double delta, double a) {
  if (!(delta > 0) || !(a > 0) || a >= 1)
    throw std::invalid_argument("f_delta_a: need delta > 0, a in (0,1)");
  const double log2 = std::log(2.0);
  return 4 / log2 * (6 / delta + 1) * std::pow(delta, -log2 / std::log(1.5)) * std::log(8 / a);
}

struct PropagationReport {
  BigRat delta, a;
  int i = 0;
  double C1 = 1.0;
  double i0_half_delta = 0;  // threshold scale at phi = delta/2
  double f = 0;
  double i_min = 0;          // scale required by the contradiction argument
  bool scale_hypothesis = false;
  int K = -1;                     // first cascade index past the termination bound
  std::vector<BigRat> h;          // exact cascade values h_0..h_min(K,20)
  std::vector<BigRat> zeta;       // cascade exponents 3/2 - (3/2)^k delta
  HpnReport base_density;         // empirical density of the k = 0 index set
  std::string notes;              // which hypotheses exceed desk scale
};

inline PropagationReport propagation_report(const CountTable& p, const BigRat& delta,
                                            const BigRat& a, int i, const BigRat& mu_ref_in = 0,
                                            double C1 = 1.0) {
  if (!(delta > 0) || !(a > 0) || a >= 1)
    throw std::invalid_argument("propagation_report: need delta > 0, a in (0,1)");
  PropagationReport out;
  out.delta = delta;
  out.a = a;
  out.i = i;
  out.C1 = C1;
  const double d = static_cast<double>(delta);
  const double av = static_cast<double>(a);
  const double log2 = std::log(2.0);
  out.i0_half_delta = i0_threshold(d / 2, C1);
  out.f = f_delta_a(d, av);
  out.i_min = out.i0_half_delta + out.f + 2 / log2 * (6 / d + 1) * std::log(1 / av);
  out.scale_hypothesis = i >= out.i_min;

  // K: first k where the cascade value is small enough to terminate
  const double coeff = 2 / log2 * (6 / d + 1);
  const double rhs = out.f + coeff * std::log(1 / av);
  for (int k = 0; k <= 64; ++k) {
    // log h_k(a)^{-1} = (2^k - 1) log 8 + 2^k log a^{-1}
    double pow2k = std::ldexp(1.0, k);
    double log_inv_h = (pow2k - 1) * std::log(8.0) + pow2k * std::log(1 / av);
    if (coeff * log_inv_h > rhs) {
      out.K = k;
      break;
    }
  }

  out.h = h_cascade(a, std::min(out.K < 0 ? 20 : out.K, 20));
  BigRat step = delta;
  for (int k = 0; out.K >= 0 && k <= out.K && k <= 20; ++k) {
    out.zeta.push_back(BigRat(3, 2) - step);
    step = step * 3 / 2;
  }

  BigRat mu_ref = mu_ref_in;
  if (!(mu_ref > 0)) mu_ref = mu_lower_bound(p);
  out.base_density = hpn_report(p, BigRat(3, 2) - delta, mu_ref);
  out.notes =
      "scales above the table's reach are reported by formula only; the "
      "hypothesis scale i_min is far beyond desk-scale enumeration";
  return out;
}

// ---- exports -------------------------------------------------------------

inline std::string exponents_csv(const ExponentTable& t) {
  std::ostringstream out;
  out << "n,mu_ref,theta,xi,closing_prob,msd\n";
  out << std::setprecision(12);
  for (const auto& [n, row] : t.rows) {
    out << n << ',' << t.mu_ref << ',';
    if (std::isnan(row.theta)) out << "";
    else out << row.theta;
    out << ',';
    if (std::isnan(row.xi)) out << "";
    else out << row.xi;
    out << ',';
    if (row.has_closing) out << row.closing_prob;
    out << ',';
    if (row.has_msd) out << row.msd;
    out << '\n';
  }
  return out.str();
}

inline std::string gj_hist_csv(const std::vector<GjFrequency>& tables) {
  std::ostringstream out;
  out << "n,k,count\n";
  for (const GjFrequency& t : tables)
    for (const auto& [k, c] : t.histogram) out << t.n << ',' << k << ',' << c << '\n';
  return out.str();
}

inline json hpn_report_to_json(const HpnReport& r) {
  json blocks = json::array();
  for (const auto& b : r.blocks)
    blocks.push_back({{"i", b.i},
                      {"members", b.members},
                      {"evens", b.evens},
                      {"complete", b.complete}});
  return json{{"zeta", static_cast<double>(r.zeta)},
              {"mu_ref", static_cast<double>(r.mu_ref)},
              {"members", r.members},
              {"blocks", std::move(blocks)}};
}

inline json propagation_json(const PropagationReport& r) {
  json h = json::array(), zeta = json::array();
  for (const BigRat& v : r.h) h.push_back(static_cast<double>(v));
  for (const BigRat& v : r.zeta) zeta.push_back(static_cast<double>(v));
  return json{{"delta", static_cast<double>(r.delta)},
              {"a", static_cast<double>(r.a)},
              {"i", r.i},
              {"C1", r.C1},
              {"i0_half_delta", r.i0_half_delta},
              {"f", r.f},
              {"i_min", r.i_min},
              {"scale_hypothesis", r.scale_hypothesis},
              {"K", r.K},
              {"h", std::move(h)},
              {"zeta", std::move(zeta)},
              {"base_density", hpn_report_to_json(r.base_density)},
              {"notes", r.notes}};
}

}  // namespace sapforge
