#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "modtrace/ffield.hpp"
#include "modtrace/fqpoly.hpp"

namespace modtrace {

// rank 2 Drinfeld modules over F_{P^n} for A = F_q[T]
struct DrinfeldParams {
  using Elem = FqField::Elem;

  FieldPtr Fq;
  FqPoly P;
  unsigned n = 1;
  FieldPtr L;       // F_{q^m}
  Elem gammaT = 0;  // image of T in L, lex-least root of P
  FqPoly wp;        // P^n
  unsigned m = 1;   // n deg P

  static DrinfeldParams make(FieldPtr Fq, const FqPoly& P, unsigned n,
                             std::uint64_t maxField = kDefaultMaxFieldSize);
  static DrinfeldParams make(std::uint64_t q, const std::string& P, unsigned n,
                             std::uint64_t maxField = kDefaultMaxFieldSize);

  std::uint64_t q() const { return Fq->size(); }
  std::uint32_t p() const { return Fq->p(); }
  // element of F_q viewed inside L
  Elem lift(Elem c) const;
  Elem gamma(const FqPoly& a) const { return a.eval_in(*L, gammaT); }
  std::string describe() const;
};

// twisted polynomial sum c_i tau^i over L, tau the q-power map
using Twisted = std::vector<FqField::Elem>;

Twisted tw_add(const FqField& L, const Twisted& a, const Twisted& b);
Twisted tw_mul(const FqField& L, std::uint64_t q, const Twisted& a, const Twisted& b);
Twisted tw_trim(Twisted a);
Twisted phi_T(const DrinfeldParams& P, FqField::Elem g, FqField::Elem delta);
Twisted phi_of(const DrinfeldParams& P, FqField::Elem g, FqField::Elem delta, const FqPoly& a);

struct DrinfeldClass {
  FqField::Elem g = 0;
  FqField::Elem delta = 1;
  std::uint64_t autOrder = 0;
  std::uint64_t orbitSize = 0;
  FqPoly frobA;
  FqField::Elem frobB = 0;  // in F_q
};

struct FrobeniusPoly {
  FqPoly a;
  FqField::Elem b = 0;
};

// solves tau^{2m} + b phi_wp = phi_a tau^m over F_p coordinates
FrobeniusPoly frobenius_poly(const DrinfeldParams& P, FqField::Elem g, FqField::Elem delta);
bool frobenius_relation_holds(const DrinfeldParams& P, FqField::Elem g, FqField::Elem delta,
                              const FrobeniusPoly& f);

std::vector<DrinfeldClass> enumerate_classes(const DrinfeldParams& P, unsigned threads = 1);

// Frobenius on aux-torsion: roots of phi_aux in L[y]/(h), 2x2 matrix over A/aux
struct TorsionFrobenius {
  FqPoly aux;
  FqPoly trace;  // mod aux
  FqPoly det;    // mod aux
  unsigned extDegree = 0;
};

TorsionFrobenius torsion_frobenius(const DrinfeldParams& P, FqField::Elem g, FqField::Elem delta,
                                   const FqPoly& aux);

// binom(n, k) mod p by Lucas
std::uint32_t binom_mod_p(std::uint64_t n, std::uint64_t k, std::uint32_t p);

// [c_{k,l}] for k <= maxK and l in [1, q-1], optionally reduced mod a modulus
class CLTable {
 public:
  CLTable(const DrinfeldParams& P, const std::vector<DrinfeldClass>& classes, unsigned maxK,
          std::optional<FqPoly> modulus = std::nullopt);

  unsigned maxK() const { return maxK_; }
  const FqPoly& c(unsigned k, std::int64_t l) const;
  // trace of T_P^n on S_{k+2,l}
  FqPoly trace(unsigned k, std::int64_t l) const;
  bool in_prime_field(unsigned k, std::int64_t l) const;

 private:
  FqPoly reduce(const FqPoly& f) const { return modulus_ ? f % *modulus_ : f; }
  const DrinfeldParams* P_;
  unsigned maxK_;
  std::optional<FqPoly> modulus_;
  std::vector<std::vector<FqPoly>> c_;
  std::vector<FqPoly> wpPow_;  // (-wp)^j
};

unsigned type_index(std::int64_t l, std::uint64_t q);

FqPoly trace_Tpn(const DrinfeldParams& P, const std::vector<DrinfeldClass>& classes, unsigned k,
                 std::int64_t l);

// sum over j = r mod m of binom(k-j, j)(-b wp)^j
FqPoly g_coeff(const DrinfeldParams& P, FqField::Elem b, std::int64_t r, unsigned m, unsigned k);
// sum over j = r mod m of binom(k-j, j) b^j
FqField::Elem h_coeff(const FqField& Fq, FqField::Elem b, std::int64_t r, unsigned m, unsigned k);

// numerator of sum_k g_{r,m,k} x^k over (1-x)^m - (-b wp x^2)^m, checked through 6m terms.
// statedSign drops the (-1)^m, which only matches for even m
struct GSeriesCertificate {
  std::vector<FqPoly> numerator;  // coefficients in x
  std::vector<FqPoly> denominator;
  bool rational = false;
};
GSeriesCertificate g_series(const DrinfeldParams& P, FqField::Elem b, std::int64_t r, unsigned m,
                            bool statedSign = false);

enum class DPeriodCase { TwoOrEvenDegree, NonSquare, Square, EllIsP };
// Stated: symbol cases at odd deg ell. ParitySwapped: symbol cases at even deg ell
enum class DPeriodTable { Stated, ParitySwapped };

struct DPeriodSpec {
  FqPoly ell;
  unsigned s = 1;
  unsigned sTilde = 0;
  std::uint64_t mEllS = 0;
  int symbol = 0;  // (wp/ell) for odd p, 0 otherwise
  DPeriodCase caseTag = DPeriodCase::TwoOrEvenDegree;
  DPeriodTable table = DPeriodTable::Stated;
  std::uint64_t period = 0;
  unsigned k0 = 0;
};

unsigned ceil_log(std::uint64_t base, std::uint64_t s);
int residue_symbol(const FqPoly& a, const FqPoly& ell);
DPeriodSpec dperiod_for(const DrinfeldParams& P, const FqPoly& ell, unsigned s,
                        DPeriodTable table = DPeriodTable::Stated);
std::string case_name(DPeriodCase c);

struct DPeriodCheck {
  unsigned k = 0;
  FqPoly lhs, rhs;  // mod ell^s
  FqPoly N, U;
  bool pass = false;
  bool splitOk = false;  // trace = -N - U mod ell^s
};

struct DPeriodReport {
  DPeriodSpec spec;
  std::int64_t l = 1;
  std::vector<DPeriodCheck> checks;
  bool allPass() const;
  std::vector<std::string> json_lines(const DrinfeldParams& P) const;
};

DPeriodReport verify_period_ff(const DrinfeldParams& P, const std::vector<DrinfeldClass>& classes,
                               const FqPoly& ell, unsigned s, std::int64_t l, unsigned kLo,
                               unsigned kHi, DPeriodTable table = DPeriodTable::Stated);

struct TrInfty {
  FqPoly trace;
  unsigned bound = 0;                  // ceil(k/2) deg wp
  std::optional<unsigned> valuation;   // empty when the trace is zero
};
TrInfty tr_infty(const DrinfeldParams& P, const CLTable& tab, unsigned k, std::int64_t l);

struct RamanujanRow {
  unsigned k = 0;
  unsigned l = 1;
  int degTr = -1;
  int bound = 0;  // largest allowed degree
  bool pass = true;
};

struct RamanujanReport {
  bool vacuous = false;
  unsigned s = 0;
  unsigned sTilde = 0;
  unsigned kEnd = 0;
  std::vector<RamanujanRow> rows;
  bool allPass() const;
  std::vector<std::string> json_lines(const DrinfeldParams& P) const;
};

RamanujanReport ramanujan_check(const DrinfeldParams& P, const std::vector<DrinfeldClass>& classes);

struct ExponentResult {
  std::uint64_t brute = 0;
  std::uint64_t formula = 0;
  bool ok() const { return brute == formula; }
};
ExponentResult exponent_check(const FqPoly& ell, unsigned s,
                              std::uint64_t maxSize = kDefaultMaxFieldSize);

std::string poly_json(const FqPoly& f);

}  // namespace modtrace
