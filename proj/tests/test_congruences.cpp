#include <gtest/gtest.h>

#include <random>

#include "modtrace/congruences.hpp"

using namespace modtrace;

namespace {
TraceDistribution dist(std::uint64_t q, const std::string& h) {
  auto pp = *as_prime_power(q);
  return distribution(field(pp.p, pp.a), LevelStructureSpec::by_name(h));
}
}  // namespace

TEST(Congruences, ZPolyBasics) {
  ZPoly a{1, 1}, b{-1, 1};
  EXPECT_EQ(zp_mul(a, b), (ZPoly{-1, 0, 1}));
  EXPECT_EQ(zp_sub(a, a), ZPoly{});
  EXPECT_EQ(zp_pow(a, 3), (ZPoly{1, 3, 3, 1}));
  EXPECT_EQ(*zp_divexact(zp_xn_minus_one(6), zp_xn_minus_one(2)), (ZPoly{1, 0, 1, 0, 1}));
  EXPECT_FALSE(zp_divexact(zp_xn_minus_one(5), zp_xn_minus_one(2)));
  EXPECT_FALSE(zp_divexact(ZPoly{1, 0, 1}, ZPoly{0, 2}));
}

TEST(Congruences, CoeffFamilyDefinition) {
  // m = 1 collapses to h_k(t) at t = 1 with x y = q, i.e. sum_j binom(k-j,j)(-q)^j
  for (std::uint64_t q : {2, 3, 5})
    for (unsigned k = 0; k < 20; ++k) {
      mpz_class s = 0;
      for (unsigned j = 0; 2 * j <= k; ++j) s += binomial(k - j, j) * ipow(-mpz_class(q), j);
      EXPECT_EQ(f_coeff(q, 0, 1, k), s);
    }
  CoeffFamily F(3, 4);
  EXPECT_EQ(F.value(-1, 9), F.value(3, 9));
  EXPECT_THROW(CoeffFamily(3, 0), Error);
}

TEST(Congruences, NumeratorDegreeBound) {
  for (std::uint64_t q : {2, 3, 7})
    for (std::uint64_t m : {1, 2, 3, 6})
      for (std::int64_t r = 0; r < static_cast<std::int64_t>(m); ++r)
        for (unsigned delta : {0u, 1u}) {
          ZPoly h = f_numerator(q, r, m, delta);
          EXPECT_LE(static_cast<std::int64_t>(h.size()) - 1, static_cast<std::int64_t>(4 * m - 2 - delta));
        }
}

TEST(Congruences, PeriodTable) {
  LevelFlags rep{true, false, 0};
  EXPECT_EQ(period_for(5, 1, 2, rep).n, 24u);
  EXPECT_EQ(period_for(5, 1, 4, rep).n, 60u);
  EXPECT_EQ(period_for(5, 2, 4, rep).n, 300u);
  EXPECT_EQ(period_for(3, 1, 2, rep).n, 8u);
  EXPECT_EQ(period_for(2, 3, 7, rep).n, 24u);
  EXPECT_EQ(period_for(2, 3, 7, rep).caseTag, PeriodCase::TwoNonSquare);
  EXPECT_EQ(period_for(2, 3, 9, rep).n, 12u);
  EXPECT_EQ(period_for(2, 3, 9, rep).caseTag, PeriodCase::TwoOddSquare);
  EXPECT_EQ(period_for(2, 1, 3, rep).n, 6u);
  auto p = period_for(3, 2, 9, rep);
  EXPECT_EQ(p.caseTag, PeriodCase::EllIsP);
  EXPECT_EQ(p.n, 6u);
  EXPECT_EQ(p.k0, 2u);
  EXPECT_EQ(period_for(3, 2, 3, rep).k0, 3u);
  EXPECT_EQ(period_for(5, 3, 2, rep).k0, 2u);
  // non-representable, -Id in H
  LevelFlags l1{false, true, 2};
  auto sh = period_for(2, 1, 5, l1);
  EXPECT_TRUE(sh.shifted);
  EXPECT_EQ(sh.sEff, 2u);
  EXPECT_EQ(sh.k0, 0u);
  EXPECT_EQ(period_for(3, 1, 5, LevelFlags{false, true, 1}).sEff, 2u);
  EXPECT_FALSE(period_for(5, 1, 2, l1).shifted);
  EXPECT_THROW(period_for(2, 1, 5, LevelFlags{false, true, 0}), Error);
  EXPECT_THROW(period_for(4, 1, 5, rep), Error);
  EXPECT_THROW(period_for(3, 1, 6, rep), Error);
}

TEST(Congruences, VerifyLevelOne) {
  auto D = dist(2, "1");
  for (unsigned ell : {3u, 5u, 7u})
    for (unsigned s : {1u, 2u}) {
      auto P = period_for(ell, s, 2, level_flags(D, ell));
      auto R = verify_periodicity(D, ell, s, P.k0, P.k0 + 2 * P.n, EisSpec::level_one());
      EXPECT_TRUE(R.allPass()) << ell << " " << s;
      EXPECT_EQ(R.checks.size(), 2 * P.n + 1);
    }
  auto R = verify_periodicity(D, 5, 1, 0, 3, EisSpec::level_one());
  EXPECT_EQ(R.json_lines().size(), 4u);
  EXPECT_NE(R.json_lines()[0].find("\"n\":24"), std::string::npos);
}

TEST(Congruences, VerifyRejectsWindowBelowFloor) {
  auto D = dist(2, "1");
  EXPECT_THROW(verify_periodicity(D, 5, 3, 0, 10, EisSpec::level_one()), Error);
}

TEST(Congruences, VerifyUnknownEisNeedsEvenPeriod) {
  auto D = dist(7, "gamma1(4)");
  // ell = 3, q = 7 = 1 mod 3: n = 12 even, eis cancels
  auto R = verify_periodicity(D, 3, 1, 0, 30, EisSpec::unknown());
  EXPECT_TRUE(R.allPass());
  EXPECT_FALSE(R.eisKnown);
}

TEST(Congruences, VerifyDetectsWrongPeriod) {
  // halving the period must break somewhere; compare raw residues
  auto D = dist(2, "1");
  auto sig = sigma_residues(D, 5, 200);
  bool differs = false;
  for (unsigned k = 0; k < 100; ++k) differs |= sig[k] != sig[k + 12];
  EXPECT_TRUE(differs);
}

TEST(Congruences, CertificateExamples) {
  // d = 1 - x, f = 1: a_k = 1, period 1
  auto c = periodic_certificate(ZPoly{1}, ZPoly{1, -1}, 1, 7);
  EXPECT_TRUE(c.divides);
  EXPECT_TRUE(c.periodic);
  // d = 1 + x^2 divides x^4 - 1 mod anything
  c = periodic_certificate(ZPoly{3, 1}, ZPoly{1, 0, 1}, 4, 9);
  EXPECT_TRUE(c.divides && c.periodic);
  // 1 - 2x does not divide x^3 - 1 mod 5
  c = periodic_certificate(ZPoly{1}, ZPoly{1, -2}, 3, 5);
  EXPECT_FALSE(c.divides);
  EXPECT_FALSE(c.periodic);
  EXPECT_THROW(periodic_certificate(ZPoly{1}, ZPoly{0, 1}, 1, 5), Error);
}

TEST(Congruences, DenominatorDividesCyclotomic) {
  for (unsigned ell : {3u, 5u})
    for (std::uint64_t q : {2, 3, 4, 6, 7, 11, 14})
      for (unsigned s = 1; s <= 2; ++s)
        for (unsigned t = 1; t <= s; ++t) {
          if (q % ell == 0) continue;
          mpz_class mod = ipow(ell, s + 1 - t);
          ZPoly d = f_denominator(q, half_unit_order(ell, t));
          auto c = periodic_certificate(f_numerator(q, 0, half_unit_order(ell, t), 0), d, n_U(ell, s, q), mod);
          EXPECT_TRUE(c.divides) << ell << " " << q << " " << s << " " << t;
          EXPECT_TRUE(c.periodic);
        }
}

TEST(Congruences, HFormula) {
  for (unsigned k = 0; k <= 20; ++k) EXPECT_TRUE(check_hformula(k));
}

TEST(Congruences, LucasRandom) {
  std::mt19937_64 rng(2024);
  const unsigned primes[] = {2, 3, 5, 7, 11};
  for (int it = 0; it < 400; ++it) {
    unsigned ell = primes[rng() % 5];
    unsigned s = 1 + rng() % 3;
    std::uint64_t k = rng() % 300, j = rng() % 40;
    EXPECT_TRUE(check_lucas(k, j, ell, s)) << k << " " << j << " " << ell << " " << s;
  }
}

TEST(Congruences, FSumIdentities) {
  for (std::uint64_t q : {2, 4, 7})
    for (unsigned s = 1; s <= 3; ++s)
      for (unsigned t = 1; t <= s; ++t)
        for (std::uint64_t k = 0; k < 30; k += 3) {
          for (std::int64_t r = 0; r < 3; ++r) {
            EXPECT_TRUE(check_f_sum(q, 3, s, t, r, k));
            EXPECT_TRUE(check_f_sum(q, 5, s, t, r, k));
          }
          if (q % 2 == 1) EXPECT_TRUE(check_f_sum_even(q, s, t, 0, k)) << q << " " << s << " " << t << " " << k;
        }
}

TEST(Congruences, CoefficientPeriods) {
  for (std::uint64_t q : {2, 4, 7, 11})
    for (unsigned s = 1; s <= 2; ++s)
      for (unsigned t = 1; t <= s; ++t)
        for (std::uint64_t k = 0; k < 40; k += 5)
          for (std::int64_t r = 0; r < 2; ++r) {
            EXPECT_TRUE(check_n_U(q, 3, s, t, r, k));
            if (q % 5) EXPECT_TRUE(check_n_U(q, 5, s, t, r, k));
          }
  for (std::uint64_t q : {3, 5, 7, 9})
    for (unsigned s = 1; s <= 3; ++s)
      for (unsigned t = 1; t <= s; ++t)
        for (std::uint64_t k = 0; k < 40; k += 3) EXPECT_TRUE(check_n_U_even(q, s, t, 0, k));
}

TEST(Congruences, FacultyCofactor) {
  for (unsigned ell : {2u, 3u, 5u, 7u})
    for (std::uint64_t n : {1, 2, 3, 6}) {
      auto g = faculty_cofactor(ell, n);
      ASSERT_TRUE(g) << ell << " " << n;
      EXPECT_EQ(g->size(), n * (ell - 2) + 1);
    }
}

TEST(Congruences, RootOfUnity) {
  EXPECT_TRUE(check_rootofunity(7, 3));
  EXPECT_TRUE(check_rootofunity(11, 10));
  EXPECT_TRUE(check_rootofunity(13, 4));
  EXPECT_THROW(check_rootofunity(7, 4), Error);
}

TEST(Congruences, DivUpgradeRandom) {
  std::mt19937_64 rng(7);
  for (int it = 0; it < 30; ++it) {
    unsigned ell = it % 2 ? 3 : 5;
    unsigned m = 1 + rng() % 2, r = 1 + rng() % 2;
    // d = 1 - x^2 divides x^2 - 1; add ell^m noise of lower degree
    ZPoly f{1, 0, -1};
    mpz_class lm = ipow(ell, m);
    f[0] += lm * static_cast<long>(rng() % 5);
    f[1] += lm * static_cast<long>(rng() % 5);
    EXPECT_TRUE(check_div_upgrade(f, ell, m, 2, r));
  }
  EXPECT_THROW(check_div_upgrade(ZPoly{1, 1, 1}, 3, 1, 2, 1), Error);
}

TEST(Congruences, EllDividesQ) {
  for (auto [q, ell] : std::vector<std::pair<std::uint64_t, unsigned>>{{2, 2}, {3, 3}, {9, 3}, {5, 5}, {4, 2}})
    for (unsigned s = 1; s <= 2; ++s)
      for (std::uint64_t k = 0; k < 30; ++k) EXPECT_TRUE(check_ell_divides_q(q, ell, s, s, 0, k)) << q << " " << s << " " << k;
  EXPECT_THROW(check_ell_divides_q(3, 2, 1, 1, 0, 1), Error);
}
