#include <gtest/gtest.h>

#include <map>
#include <set>

#include <gmpxx.h>

#include "modtrace/drinfeld.hpp"

using namespace modtrace;

using Elem = FqField::Elem;

namespace {

DrinfeldParams params(std::uint64_t q, const std::string& P, unsigned n) {
  return DrinfeldParams::make(q, P, n);
}

// -sum over classes of h_k(a, b wp) b^{l-k-1} / #Aut, with l left unreduced
FqPoly trace_by_recurrence(const DrinfeldParams& P, const std::vector<DrinfeldClass>& C, unsigned k,
                           std::int64_t l) {
  const FqField& F = *P.Fq;
  FqPoly acc = FqPoly::zero(P.Fq);
  for (auto& c : C) {
    FqPoly h0 = FqPoly::constant(P.Fq, 1), h1 = c.frobA;
    FqPoly N = P.wp.scale(c.frobB);
    FqPoly hk = h0;
    if (k == 1) hk = h1;
    for (unsigned i = 2; i <= k; ++i) {
      hk = c.frobA * h1 - N * h0;
      h0 = h1;
      h1 = hk;
    }
    Elem w = F.inv(F.from_int(static_cast<std::int64_t>(c.autOrder % F.p())));
    std::int64_t e = l - static_cast<std::int64_t>(k) - 1;
    acc = acc + hk.scale(F.mul(w, F.pow(c.frobB, e)));
  }
  return -acc;
}

}  // namespace

TEST(Drinfeld, EnumerateSmallExamples) {
  auto P = params(2, "T", 1);
  auto C = enumerate_classes(P);
  ASSERT_EQ(C.size(), 2u);
  std::set<std::pair<Elem, Elem>> got;
  for (auto& c : C) {
    got.insert({c.g, c.delta});
    EXPECT_EQ(c.autOrder, 1u);
  }
  EXPECT_EQ(got, (std::set<std::pair<Elem, Elem>>{{0, 1}, {1, 1}}));

  auto P3 = params(3, "T", 1);
  auto C3 = enumerate_classes(P3);
  EXPECT_EQ(C3.size(), 6u);
  for (auto& c : C3) EXPECT_EQ(c.autOrder, 2u);
}

TEST(Drinfeld, OrbitsMatchBruteForce) {
  for (auto [q, Ps, n] : std::vector<std::tuple<int, std::string, unsigned>>{
           {2, "T", 2}, {2, "T^2+T+1", 1}, {3, "T+1", 2}, {3, "T^2+1", 1}, {4, "T", 1}}) {
    auto P = params(q, Ps, n);
    const FqField& L = *P.L;
    auto C = enumerate_classes(P, 3);
    // union of explicit orbits
    std::map<std::pair<Elem, Elem>, int> orbitOf;
    int next = 0;
    for (Elem g = 0; g < L.size(); ++g)
      for (Elem d = 1; d < L.size(); ++d) {
        if (orbitOf.count({g, d})) continue;
        for (Elem u = 1; u < L.size(); ++u)
          orbitOf[{L.mul(L.pow(u, q - 1), g), L.mul(L.pow(u, q * q - 1), d)}] = next;
        ++next;
      }
    EXPECT_EQ(C.size(), static_cast<std::size_t>(next)) << P.describe();
    std::set<int> seen;
    std::uint64_t total = 0;
    for (auto& c : C) {
      EXPECT_TRUE(seen.insert(orbitOf.at({c.g, c.delta})).second);
      std::uint64_t stab = 0;
      for (Elem u = 1; u < L.size(); ++u)
        stab += L.mul(L.pow(u, q - 1), c.g) == c.g && L.mul(L.pow(u, q * q - 1), c.delta) == c.delta;
      EXPECT_EQ(c.autOrder, stab);
      EXPECT_EQ(c.autOrder % P.p(), P.p() - 1u);
      total += c.orbitSize;
    }
    EXPECT_EQ(total, std::uint64_t(L.size()) * (L.size() - 1));
  }
}

TEST(Drinfeld, FrobeniusHandExamples) {
  auto P = params(2, "T", 1);
  auto f = frobenius_poly(P, 1, 1);
  EXPECT_EQ(f.a, FqPoly::parse(P.Fq, "1"));
  EXPECT_EQ(f.b, 1u);
  f = frobenius_poly(P, 0, 1);
  EXPECT_TRUE(f.a.is_zero());
  EXPECT_EQ(f.b, 1u);
  EXPECT_THROW(frobenius_poly(P, 1, 0), Error);
}

// phi_T = tau^2 - 1 over F_9: tau^2 = phi_{T+1}, so the polynomial is (X - (T+1))^2
TEST(Drinfeld, FrobeniusInsideA) {
  auto P = params(3, "T+1", 2);
  auto f = frobenius_poly(P, 0, 1);
  EXPECT_EQ(f.a, FqPoly::parse(P.Fq, "2T+2"));
  EXPECT_EQ(f.b, 1u);
  EXPECT_TRUE(frobenius_relation_holds(P, 0, 1, f));
  auto t = torsion_frobenius(P, 0, 1, FqPoly::parse(P.Fq, "T"));
  EXPECT_EQ(t.trace, f.a % FqPoly::parse(P.Fq, "T"));
}

TEST(Drinfeld, TorsionOracleAgrees) {
  for (auto [q, Ps, n] : std::vector<std::tuple<int, std::string, unsigned>>{
           {2, "T", 1}, {2, "T^2+T+1", 1}, {3, "T", 1}, {3, "T+1", 2}}) {
    auto P = params(q, Ps, n);
    for (auto& c : enumerate_classes(P)) {
      EXPECT_LE(2 * c.frobA.degree(), static_cast<int>(P.m));
      EXPECT_TRUE(frobenius_relation_holds(P, c.g, c.delta, {c.frobA, c.frobB}));
      for (Elem a = 0; a < P.q(); ++a) {
        FqPoly aux = FqPoly::T(P.Fq) - FqPoly::constant(P.Fq, a);
        if ((P.wp % aux).is_zero()) continue;
        auto t = torsion_frobenius(P, c.g, c.delta, aux);
        EXPECT_EQ(t.trace, c.frobA % aux) << P.describe();
        EXPECT_EQ(t.det, P.wp.scale(c.frobB) % aux);
      }
    }
  }
  // degree 2 auxiliary prime
  auto P = params(2, "T", 2);
  FqPoly aux = FqPoly::parse(P.Fq, "T^2+T+1");
  for (auto& c : enumerate_classes(P)) {
    auto t = torsion_frobenius(P, c.g, c.delta, aux);
    EXPECT_EQ(t.trace, c.frobA % aux);
    EXPECT_EQ(t.det, P.wp.scale(c.frobB) % aux);
  }
  EXPECT_THROW(torsion_frobenius(P, 0, 1, FqPoly::parse(P.Fq, "T")), Error);
}

TEST(Drinfeld, BinomialLucas) {
  for (std::uint32_t p : {2u, 3u, 5u})
    for (unsigned n = 0; n < 60; ++n)
      for (unsigned k = 0; k <= n + 2; ++k) {
        mpz_class b;
        mpz_bin_uiui(b.get_mpz_t(), n, k);
        EXPECT_EQ(binom_mod_p(n, k, p), mpz_class(b % p).get_ui());
      }
}

TEST(Drinfeld, TraceMatchesRecurrence) {
  for (auto [q, Ps, n] : std::vector<std::tuple<int, std::string, unsigned>>{
           {2, "T", 1}, {2, "T^2+T+1", 2}, {3, "T+1", 1}, {3, "T^2+1", 2}}) {
    auto P = params(q, Ps, n);
    auto C = enumerate_classes(P);
    CLTable tab(P, C, 30);
    for (unsigned k = 0; k <= 30; ++k)
      for (std::int64_t l = -2; l <= 4; ++l) {
        EXPECT_EQ(tab.trace(k, l), trace_by_recurrence(P, C, k, l)) << P.describe() << " " << k << " " << l;
        EXPECT_EQ(tab.trace(k, l), tab.trace(k, l + q - 1));
      }
    EXPECT_EQ(trace_Tpn(P, C, 7, 1), tab.trace(7, 1));
  }
}

TEST(Drinfeld, TraceExamples) {
  auto P = params(2, "T", 1);
  auto C = enumerate_classes(P);
  EXPECT_TRUE(trace_Tpn(P, C, 0, 1).is_zero());
  // weight 8, type 1, mod T^2
  for (auto Ps : {"T+1", "T+2", "T^2+1"})
    for (unsigned n : {1u, 2u}) {
      auto P3 = params(3, Ps, n);
      FqPoly T2 = FqPoly::parse(P3.Fq, "T^2");
      EXPECT_EQ(trace_Tpn(P3, enumerate_classes(P3), 6, 1) % T2, FqPoly::parse(P3.Fq, "1")) << Ps << n;
    }
}

// weight K, type l: wp(alpha)^{n(l-1)} dim S_{K,l} mod (T - alpha)
TEST(Drinfeld, DegreeOnePrimeCongruence) {
  for (auto [q, Ps, n] : std::vector<std::tuple<int, std::string, unsigned>>{
           {2, "T^2+T+1", 1}, {3, "T", 2}, {3, "T^2+1", 1}}) {
    auto P = params(q, Ps, n);
    CLTable tab(P, enumerate_classes(P), 30);
    for (Elem a = 0; a < P.q(); ++a) {
      FqPoly ell = FqPoly::T(P.Fq) - FqPoly::constant(P.Fq, a);
      if (ell == P.P) continue;
      Elem wa = P.P.eval(a);
      for (int K = 2; K <= 32; ++K)
        for (int l = 1; l < q; ++l) {
          int dim = (K - 2 * l) % (q - 1) == 0 ? (K + (q - 1 - l) * (q + 1)) / (q * q - 1) : 0;
          Elem want = P.Fq->mul(P.Fq->pow(wa, std::int64_t(n) * (l - 1)), P.Fq->from_int(dim));
          EXPECT_EQ((tab.trace(K - 2, l) % ell).coeff(0), want) << P.describe() << " K=" << K;
        }
    }
  }
}

TEST(Drinfeld, GCoefficients) {
  auto P = params(3, "T+1", 1);
  for (Elem b : {1u, 2u}) {
    EXPECT_EQ(g_coeff(P, b, 0, 1, 2), FqPoly::constant(P.Fq, 1) - P.wp.scale(b));
    for (unsigned m = 1; m <= 4; ++m)
      for (std::int64_t r = 0; r < 4; ++r)
        EXPECT_EQ(g_coeff(P, b, r, m, 0), FqPoly::constant(P.Fq, r % m == 0 ? 1 : 0));
    for (unsigned m = 1; m <= 4; ++m)
      for (std::int64_t r = 0; r < static_cast<std::int64_t>(m); ++r) {
        auto G = g_series(P, b, r, m);
        EXPECT_TRUE(G.rational) << m << " " << r;
        EXPECT_LE(static_cast<int>(G.numerator.size()) - 1, static_cast<int>(2 * m - 2));
        EXPECT_EQ(g_series(P, b, r, m, true).rational, m % 2 == 0) << m << " " << r;
      }
  }
  // h at b = 1 sums binomials
  auto F = field(3, 1);
  for (unsigned k = 0; k < 12; ++k) {
    std::uint32_t s = 0;
    for (unsigned j = 0; 2 * j <= k; ++j) s += binom_mod_p(k - j, j, 3);
    EXPECT_EQ(h_coeff(*F, 1, 0, 1, k), F->from_int(s));
  }
}

TEST(Drinfeld, ResidueSymbolMatchesSquares) {
  auto F = field(3, 1);
  for (auto& ell : monic_irreducibles(F, 2))
    for (auto& a : {FqPoly::parse(F, "T"), FqPoly::parse(F, "T+1"), FqPoly::parse(F, "2T^2+1")}) {
      std::set<std::vector<Elem>> sq;
      for (Elem x0 = 0; x0 < 3; ++x0)
        for (Elem x1 = 0; x1 < 3; ++x1) {
          FqPoly x(F, {x0, x1});
          if (!x.is_zero()) sq.insert(((x * x) % ell).coeffs());
        }
      FqPoly r = a % ell;
      int want = r.is_zero() ? 0 : (sq.count(r.coeffs()) ? 1 : -1);
      EXPECT_EQ(residue_symbol(a, ell), want);
    }
}

TEST(Drinfeld, PeriodTable) {
  auto P = params(3, "T+1", 1);
  auto S = dperiod_for(P, FqPoly::parse(P.Fq, "T"), 1);
  EXPECT_EQ(S.caseTag, DPeriodCase::Square);
  EXPECT_EQ(S.period, 12u);
  EXPECT_EQ(S.k0, 0u);
  auto Sw = dperiod_for(P, FqPoly::parse(P.Fq, "T"), 1, DPeriodTable::ParitySwapped);
  EXPECT_EQ(Sw.period, 24u);
  auto E = dperiod_for(P, P.P, 2);
  EXPECT_EQ(E.caseTag, DPeriodCase::EllIsP);
  EXPECT_EQ(E.period, 3u * 2u);
  EXPECT_EQ(E.k0, 3u);
  EXPECT_EQ(dperiod_for(params(3, "T+1", 2), P.P, 2).k0, 2u);
  auto P2 = params(2, "T", 1);
  auto S2 = dperiod_for(P2, FqPoly::parse(P2.Fq, "T^2+T+1"), 2);
  EXPECT_EQ(S2.period, 2u * 2u * 15u);
  EXPECT_EQ(S2.mEllS, 2u * 3u / 2u);
  EXPECT_EQ(dperiod_for(P2, FqPoly::parse(P2.Fq, "T+1"), 1).mEllS, 1u);
  EXPECT_EQ(ceil_log(3, 2), 1u);
  EXPECT_EQ(ceil_log(2, 3), 2u);
  EXPECT_EQ(ceil_log(3, 1), 0u);
}

TEST(Drinfeld, VerifyPeriodBranches) {
  auto P = params(2, "T^2+T+1", 1);
  auto C = enumerate_classes(P);
  for (auto ell : {"T", "T^2+T+1"})
    for (unsigned s : {1u, 2u}) {
      auto S = dperiod_for(P, FqPoly::parse(P.Fq, ell), s);
      auto R = verify_period_ff(P, C, FqPoly::parse(P.Fq, ell), s, 1, S.k0, S.k0 + 2 * S.period);
      EXPECT_TRUE(R.allPass()) << ell << " " << s;
    }
  EXPECT_THROW(verify_period_ff(P, C, P.P, 2, 1, 0, 5), Error);

  // odd degree ell at p = 3: stated period breaks, swapped holds, split always holds
  auto P3 = params(3, "T+1", 1);
  auto C3 = enumerate_classes(P3);
  FqPoly T = FqPoly::parse(P3.Fq, "T");
  auto bad = verify_period_ff(P3, C3, T, 1, 1, 0, 24);
  EXPECT_FALSE(bad.allPass());
  for (auto& c : bad.checks) EXPECT_TRUE(c.splitOk);
  auto good = verify_period_ff(P3, C3, T, 1, 1, 0, 48, DPeriodTable::ParitySwapped);
  EXPECT_TRUE(good.allPass());
  EXPECT_EQ(good.json_lines(P3).size(), 49u);
}

TEST(Drinfeld, TrInftyAndRamanujan) {
  auto P = params(3, "T", 1);
  auto C = enumerate_classes(P);
  CLTable tab(P, C, 30);
  for (unsigned k = 0; k <= 30; ++k) {
    auto T = tr_infty(P, tab, k, 1);
    if (T.trace.is_zero()) EXPECT_FALSE(T.valuation);
    else EXPECT_EQ(*T.valuation, T.bound - T.trace.degree());
  }
  auto R = ramanujan_check(P, C);
  EXPECT_FALSE(R.vacuous);
  EXPECT_EQ(R.s, 1u);
  EXPECT_EQ(R.kEnd, 25u);
  EXPECT_EQ(R.rows.size(), 50u);
  EXPECT_TRUE(R.allPass());
  EXPECT_NE(R.json_lines(P)[0].find("\"degTr\""), std::string::npos);
  auto P2 = params(3, "T+1", 2);
  auto R2 = ramanujan_check(P2, enumerate_classes(P2));
  EXPECT_EQ(R2.s, 2u);
  EXPECT_EQ(R2.kEnd, 74u);
  auto Q = params(2, "T", 1);
  EXPECT_TRUE(ramanujan_check(Q, enumerate_classes(Q)).vacuous);
}

TEST(Drinfeld, PrimeFieldRecordForSmallK) {
  auto P = params(3, "T+1", 1);
  CLTable tab(P, enumerate_classes(P), 7);
  for (unsigned k = 0; k < 8; ++k)
    for (std::int64_t l = 1; l <= 2; ++l) EXPECT_TRUE(tab.in_prime_field(k, l));
}

TEST(Drinfeld, ExponentLemma) {
  auto F3 = field(3, 1), F2 = field(2, 1);
  EXPECT_EQ(exponent_check(FqPoly::parse(F3, "T"), 1).brute, 2u);
  EXPECT_EQ(exponent_check(FqPoly::parse(F3, "T"), 2).brute, 6u);
  EXPECT_EQ(exponent_check(FqPoly::parse(F2, "T^2+T+1"), 1).brute, 3u);
  for (auto& ell : monic_irreducibles(F2, 3))
    for (unsigned s = 1; s <= 3; ++s) EXPECT_TRUE(exponent_check(ell, s).ok());
  EXPECT_THROW(exponent_check(FqPoly::parse(F2, "T"), 30, 1024), BudgetError);
}
