#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "modtrace/elltrace.hpp"
#include "modtrace/ffield.hpp"

namespace modtrace {

// integer polynomials, coefficients low to high
using ZPoly = std::vector<mpz_class>;

void zp_trim(ZPoly& f);
ZPoly zp_add(const ZPoly& f, const ZPoly& g);
ZPoly zp_sub(const ZPoly& f, const ZPoly& g);
ZPoly zp_mul(const ZPoly& f, const ZPoly& g);
ZPoly zp_pow(const ZPoly& f, unsigned e);
ZPoly zp_xn_minus_one(std::uint64_t n);
// exact quotient over Z, nullopt when d does not divide f
std::optional<ZPoly> zp_divexact(const ZPoly& f, const ZPoly& d);
ResiduePoly zp_reduce(const ZPoly& f, const mpz_class& m);

mpz_class binomial(std::uint64_t n, std::uint64_t k);
ResidueInt binom_mod(std::uint64_t k, std::uint64_t j, unsigned ell, unsigned s);
mpz_class ipow(const mpz_class& b, std::uint64_t e);
mpz_class ipow(std::uint64_t b, std::uint64_t e);

// f_{r,m,k}(q), table backed; r is read mod m
class CoeffFamily {
 public:
  CoeffFamily(std::uint64_t q, std::uint64_t m);
  std::uint64_t q() const { return q_; }
  std::uint64_t m() const { return m_; }
  mpz_class value(std::int64_t r, std::uint64_t k) const;

 private:
  std::uint64_t q_, m_;
  mutable std::mutex mu_;
  mutable std::map<std::uint64_t, std::vector<mpz_class>> rows_;  // k -> f_{0..m-1,m,k}
};

mpz_class f_coeff(std::uint64_t q, std::int64_t r, std::uint64_t m, std::uint64_t k);
// (1 + q x^2)^{2m} - x^{2m}
ZPoly f_denominator(std::uint64_t q, std::uint64_t m);
// numerator of sum_{k = delta mod 2} f_{r,m,k} x^k over f_denominator; throws if its degree exceeds 4m-2-delta
ZPoly f_numerator(std::uint64_t q, std::int64_t r, std::uint64_t m, unsigned delta);

bool is_square_mod(const mpz_class& a, const mpz_class& m);

enum class PeriodCase { OddNonSquare, OddSquare, TwoNonSquare, TwoOddSquare, EllIsP };
std::string to_string(PeriodCase c);

struct LevelFlags {
  bool representable = false;
  bool minusId = true;
  unsigned nu = 0;  // nu_ell(H, q)
};

struct PeriodSpec {
  unsigned ell = 0, s = 0;
  std::uint64_t q = 0;
  PeriodCase caseTag = PeriodCase::OddNonSquare;
  std::uint64_t n = 0;
  unsigned k0 = 0;
  std::uint64_t m = 0;  // m_{ell,s}
  unsigned sEff = 0;    // exponent used in the definition of n
  bool shifted = false;
};

PeriodSpec period_for(unsigned ell, unsigned s, std::uint64_t q, const LevelFlags& flags);
LevelFlags level_flags(const TraceDistribution& D, unsigned ell);

// sum over classes of weight * h_k(a_1), i.e. the trace sum, mod ell^s for k = 0..kmax
std::vector<mpz_class> sigma_residues(const TraceDistribution& D, const mpz_class& modulus,
                                      std::uint64_t kmax);

struct PeriodCheck {
  std::uint64_t k = 0;
  mpz_class lhs, rhs;
  bool pass = false;
};

struct PeriodReport {
  PeriodSpec spec;
  int N = 1;
  std::string H;
  bool eisKnown = false;
  std::string comparison;  // what lhs/rhs contain
  std::vector<PeriodCheck> checks;
  std::optional<PeriodCheck> firstFailure;
  bool allPass() const { return !firstFailure.has_value(); }
  std::vector<std::string> json_lines() const;
};

// window of k is [kmin, kmax]; both k and k + n are evaluated
PeriodReport verify_periodicity(const TraceDistribution& D, unsigned ell, unsigned s,
                                std::uint64_t kmin, std::uint64_t kmax, const EisSpec& eis);

struct CertificateResult {
  bool divides = false;
  bool periodic = false;
  std::optional<std::uint64_t> firstMismatch;
  std::optional<ResiduePoly> cofactor;
};

// d | x^n - 1 over Z/modulus, then a_k = a_{k+n} for deg f - deg d < k <= horizon
CertificateResult periodic_certificate(const ZPoly& f, const ZPoly& d, std::uint64_t n,
                                       const mpz_class& modulus, std::uint64_t horizon = 0);

// periods used in the coefficient lemmas
std::uint64_t n_U(unsigned ell, unsigned s, std::uint64_t q);
std::uint64_t n_U_even(unsigned s);
std::uint64_t n_N(unsigned ell, unsigned s, std::uint64_t q);

// lemma checks, each returning true when the identity holds exactly
bool check_hformula(unsigned k);
bool check_lucas(std::uint64_t k, std::uint64_t j, unsigned ell, unsigned s);
bool check_f_sum(std::uint64_t q, unsigned ell, unsigned s, unsigned t, std::int64_t r, std::uint64_t k);
bool check_f_sum_even(std::uint64_t q, unsigned s, unsigned t, std::int64_t r, std::uint64_t k);
bool check_n_U(std::uint64_t q, unsigned ell, unsigned s, unsigned t, std::int64_t r, std::uint64_t k);
bool check_n_U_even(std::uint64_t q, unsigned s, unsigned t, std::int64_t r, std::uint64_t k);
// g with (x^n - 1)^ell = x^{n ell} - 1 + (x^n - 1) ell g, and deg g = n(ell - 2)
std::optional<ZPoly> faculty_cofactor(unsigned ell, std::uint64_t n);
bool check_rootofunity(unsigned ell, unsigned m);
// f = d + ell^m * noise with d | x^n - 1; checks f | x^{n ell^r} - 1 mod ell^{m+r}
bool check_div_upgrade(const ZPoly& f, unsigned ell, unsigned m, std::uint64_t n, unsigned r);
// l | q: truncated sum congruence and the period ell^{s-1}(ell-1)
bool check_ell_divides_q(std::uint64_t q, unsigned ell, unsigned s, unsigned t, std::int64_t r,
                         std::uint64_t k);

struct LemmaTally {
  std::string name;
  std::uint64_t cases = 0;
  std::uint64_t failures = 0;
  std::string firstFailure;
};

// every lemma check over a fixed grid plus seeded random instances
std::vector<LemmaTally> lemma_suite(std::uint64_t seed, unsigned randomCases = 1000);

}  // namespace modtrace
