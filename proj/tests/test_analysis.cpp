#include <doctest.h>
#include <sapforge/analysis.hpp>
#include <sapforge/threedge.hpp>

using namespace sapforge;

namespace {

// q^n <= v, exactly
bool nth_power_below(const BigRat& q, int n, const BigRat& v) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  return bi_pow(numerator(q), n) * denominator(v) <=
         bi_pow(denominator(q), n) * numerator(v);
}

BigRat rat_pow(const BigRat& a, long long e) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  return BigRat(bi_pow(numerator(a), e), bi_pow(denominator(a), e));
}

}  // namespace

TEST_CASE("growth-constant lower bounds are certified and monotone") {
  CountTable tiny;
  tiny.model = Model::sap;
  tiny.dim = 2;
  tiny.counts[4] = 1;
  CHECK(mu_lower_bound(tiny) == 1);

  CountTable empty;
  CHECK_THROWS_AS(mu_lower_bound(empty), std::invalid_argument);
  CHECK_THROWS_AS(bridge_mu_lower_bound(empty), std::invalid_argument);

  CountTable p = count({Model::sap, 2, 14, 1});
  CountTable b = count({Model::bridge, 2, 14, 1});

  // each certified value really is a lower bound witness: q^n <= table row
  BigRat poly = mu_lower_bound(p);
  bool witnessed = false;
  for (const auto& [n, pn] : p.counts)
    if (n % 2 == 0 && nth_power_below(poly, n, BigRat(pn))) witnessed = true;
  CHECK(witnessed);
  BigRat bridge = bridge_mu_lower_bound(b);
  witnessed = false;
  for (const auto& [n, bn] : b.counts)
    if (nth_power_below(bridge, n, BigRat(bn))) witnessed = true;
  CHECK(witnessed);

  // the combined bound lands in the required window ...
  MuBound best = certified_growth_lower_bound(p, b);
  CHECK(best.value > 2);
  CHECK(best.value < BigRat(28, 10));
  CHECK(best.witness_n >= 1);

  // ... and only improves as the tables grow
  BigRat prev = 0;
  for (int nmax = 4; nmax <= 14; nmax += 2) {
    CountTable pp = count({Model::sap, 2, nmax, 1});
    CountTable bb = count({Model::bridge, 2, nmax, 1});
    BigRat cur = certified_growth_lower_bound(pp, bb).value;
    CHECK(cur >= prev);
    CHECK(mu_lower_bound(pp) >= (nmax > 4 ? mu_lower_bound(count({Model::sap, 2, nmax - 2, 1}))
                                          : BigRat(0)));
    prev = cur;
  }
}

TEST_CASE("exponent tables: definitional zeros, signs, provenance") {
  // p_n = mu_ref^n exactly -> theta = 0
  CountTable synth;
  synth.model = Model::sap;
  synth.dim = 2;
  synth.counts[4] = 16;
  CountTable nothing;
  nothing.model = Model::saw;
  nothing.dim = 2;
  ExponentTable zero = exponent_tables(synth, nothing, 2.0, "synthetic");
  CHECK(zero.rows.at(4).theta == doctest::Approx(0.0));
  CHECK(zero.mu_provenance == "synthetic");

  CHECK_THROWS_AS(exponent_tables(synth, nothing, 0.0, "bad"), std::invalid_argument);
  CHECK_THROWS_AS(exponent_tables(synth, nothing, -1.0, "bad"), std::invalid_argument);

  CountTable p = count({Model::sap, 2, 12, 1});
  CountTable c = count({Model::saw, 2, 12, 1});
  BigRat mu_low = mu_lower_bound(p);

  // c_n >= mu_low^n holds on the table, so xi >= 0 at mu_ref = mu_low
  for (const auto& [n, cn] : c.counts) CHECK(rat_pow(mu_low, n) <= BigRat(cn));
  SawMoments moments = saw_moments(8);
  ExponentTable t =
      exponent_tables(p, c, static_cast<double>(mu_low), "polygon-route bound", &moments);
  for (const auto& [n, row] : t.rows) {
    if (!std::isnan(row.xi)) CHECK(row.xi >= 0.0);
    if (n >= 4 && p.counts.count(n)) CHECK(!std::isnan(row.theta));
    CHECK(row.mu_lower <= mu_low);
  }
  CHECK(t.rows.at(12).mu_lower == mu_low);

  // theta grows with mu_ref whenever p_n <= mu_ref^n
  ExponentTable hi = exponent_tables(p, c, 2.7, "literature-scale proxy");
  for (const auto& [n, row] : t.rows)
    if (!std::isnan(row.theta)) CHECK(row.theta <= hi.rows.at(n).theta);

  // odd rows carry the closing fraction, even rows the displacement
  CHECK(t.rows.at(3).has_closing);
  CHECK(t.rows.at(3).closing_prob == BigRat(2, 9));
  CHECK(t.rows.at(5).closing_prob == closing_probability(5).census);
  CHECK(t.rows.at(2).has_msd);
  CHECK(t.rows.at(2).msd == BigRat(8, 3));

  // 3-edge analogue: same arithmetic over the relaxed polygon table
  CountTable phat = count_threedge(8, 2, 1);
  ExponentTable that = exponent_tables(phat, nothing, 2.0, "relaxed-model reference");
  for (const auto& [n, row] : that.rows) CHECK(!std::isnan(row.theta));
  CHECK(that.rows.at(2).theta == doctest::Approx(-std::log(0.5) / std::log(2.0)));
}

TEST_CASE("join-plaquette frequency histograms") {
  GjFrequency f4 = gj_frequency(4);
  CHECK(f4.histogram == std::map<int, long long>{{0, 1}});
  CHECK(f4.total == 1);
  CHECK(f4.tail_ratio.at(0) == 1);

  CountTable p = count({Model::sap, 2, 12, 1});
  for (int n = 4; n <= 12; n += 2) {
    GjFrequency f = gj_frequency(n);
    long long sum = 0;
    for (const auto& [k, c] : f.histogram) sum += c;
    CHECK(BigInt(sum) == p.at(n));
    CHECK(f.tail_ratio.at(0) == 1);
  }

  // second implementation: box scan + manual extreme-ownership test
  std::map<int, long long> oracle;
  stream_sap(12, [&](const Polygon& phi) {
    if (phi.length() != 12) return;
    int hits = 0;
    for (int ax = phi.xmin() - 1; ax <= phi.xmax(); ++ax)
      for (int ay = phi.ymin() - 1; ay <= phi.ymax(); ++ay) {
        Plaquette P(pt(ax, ay));
        if (!is_join_plaquette(phi, P)) continue;
        auto [p1, p2] = split_at(phi, P);
        auto all_max_x_in = [&](const Polygon& piece) {
          for (const Pt& v : phi.sorted_vertices())
            if (x(v) == phi.xmax() && !piece.contains_vertex(v)) return false;
          return true;
        };
        bool global = (p1.contains_vertex(phi.ne()) && all_max_x_in(p2) &&
                       p2.xmax() > p1.xmax()) ||
                      (p2.contains_vertex(phi.ne()) && all_max_x_in(p1) &&
                       p1.xmax() > p2.xmax());
        if (global) ++hits;
      }
    ++oracle[hits];
  });
  CHECK(gj_frequency(12).histogram == oracle);
}

TEST_CASE("high polygon number membership is exact") {
  // 1 >= 4^{-zeta} * 2^4 exactly when zeta >= 2
  CHECK(hpn_member(1, 4, BigRat(2), BigRat(2)));
  CHECK(!hpn_member(1, 4, BigRat(19, 10), BigRat(2)));
  CHECK(hpn_member(16, 4, BigRat(0), BigRat(2)));
  CHECK(!hpn_member(15, 4, BigRat(0), BigRat(2)));
  CHECK_THROWS_AS(hpn_member(1, 4, BigRat(1), BigRat(0)), std::invalid_argument);

  CountTable p = count({Model::sap, 2, 14, 1});
  HpnReport all = hpn_report(p, BigRat(0), BigRat(1));  // p_n >= 1 everywhere
  CHECK(all.members == std::vector<int>{4, 6, 8, 10, 12, 14});
  REQUIRE(all.blocks.size() == 3);
  CHECK(all.blocks[0].i == 2);  // (2,4]
  CHECK(all.blocks[0].evens == 1);
  CHECK(all.blocks[0].complete);
  CHECK(all.blocks[1].evens == 2);  // (4,8]
  CHECK(all.blocks[2].evens == 3);  // (8,16] truncated at 14
  CHECK(!all.blocks[2].complete);
  for (const auto& b : all.blocks) CHECK(b.members == b.evens);

  // a reference too large for the table empties the set
  HpnReport none = hpn_report(p, BigRat(1, 10), BigRat(4));
  CHECK(none.members.empty());
}

TEST_CASE("propagation arithmetic: cascade, thresholds, report") {
  // h_0 = a, h_1 = a^2/8, h_2 = a^4/512
  std::vector<BigRat> h = h_cascade(BigRat(1, 2), 2);
  CHECK(h[0] == BigRat(1, 2));
  CHECK(h[1] == BigRat(1, 32));
  CHECK(h[2] == BigRat(1, 8192));

  // closed form 8^{1-2^k} a^{2^k}, exact to k = 20
  std::vector<BigRat> deep = h_cascade(BigRat(1, 2), 20);
  for (int k = 0; k <= 20; ++k) {
    long long e = 1ll << k;
    BigRat closed = rat_pow(BigRat(1, 2), e) * BigRat(BigInt(1), bi_pow(BigInt(8), e - 1));
    CHECK(deep[static_cast<std::size_t>(k)] == closed);
  }
  std::vector<BigRat> deep35 = h_cascade(BigRat(3, 5), 10);
  for (int k = 0; k <= 10; ++k) {
    long long e = 1ll << k;
    BigRat closed = rat_pow(BigRat(3, 5), e) * BigRat(BigInt(1), bi_pow(BigInt(8), e - 1));
    CHECK(deep35[static_cast<std::size_t>(k)] == closed);
  }
  CHECK_THROWS_AS(h_cascade(BigRat(0), 3), std::invalid_argument);
  CHECK_THROWS_AS(h_cascade(BigRat(2), 3), std::invalid_argument);

  CHECK(i0_threshold(1.0) == doctest::Approx(18.0));
  CHECK(i0_threshold(100.0) == doctest::Approx(6.0));  // the flat floor takes over
  CHECK_THROWS_AS(i0_threshold(0.0), std::invalid_argument);
  CHECK(f_delta_a(0.5, 0.5) > 0);
  CHECK_THROWS_AS(f_delta_a(0.5, 1.5), std::invalid_argument);

  CountTable p = count({Model::sap, 2, 14, 1});
  PropagationReport r = propagation_report(p, BigRat(1, 2), BigRat(1, 2), 10);
  CHECK(r.K >= 0);
  CHECK(static_cast<int>(r.h.size()) == std::min(r.K, 20) + 1);
  CHECK(r.h == h_cascade(BigRat(1, 2), std::min(r.K, 20)));
  CHECK(r.zeta.front() == BigRat(1));  // 3/2 - delta
  CHECK(r.i_min > 100);                // far beyond the table: reported, not reached
  CHECK(!r.scale_hypothesis);
  CHECK(!r.base_density.members.empty());  // table counts clear a weak reference

  json j = propagation_json(r);
  CHECK(j.at("K").get<int>() == r.K);
  CHECK(j.at("base_density").at("blocks").size() == r.base_density.blocks.size());
}

TEST_CASE("csv exports") {
  CountTable p = count({Model::sap, 2, 8, 1});
  CountTable c = count({Model::saw, 2, 8, 1});
  ExponentTable t = exponent_tables(p, c, 2.3, "fixed reference");
  std::string csv = exponents_csv(t);
  CHECK(csv.rfind("n,mu_ref,theta,xi,closing_prob,msd\n", 0) == 0);
  CHECK(csv.find("\n8,") != std::string::npos);

  std::string hist = gj_hist_csv({gj_frequency(4), gj_frequency(6)});
  CHECK(hist == "n,k,count\n4,0,1\n6,0,2\n");
}
