#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "modtrace/curves.hpp"
#include "modtrace/ffield.hpp"

namespace modtrace {

inline constexpr unsigned kDefaultMaxWeight = 2048;

struct EnumOptions {
  unsigned threads = 1;
  std::uint64_t maxField = kDefaultMaxFieldSize;
};

// weighted census of [Y_H(F_q)] by trace of Frobenius
struct TraceDistribution {
  std::uint64_t q = 0;
  std::uint32_t p = 0;
  unsigned a = 0;
  FpPoly modulus;
  LevelStructureSpec H;
  std::map<std::int64_t, mpq_class> weight;  // sum of 1/#Aut(E,phi) over classes with a_1 = t
  std::map<std::int64_t, mpz_class> classes;  // unweighted number of classes (E,phi)
  unsigned nu2 = 0, nu3 = 0;                   // max valuations of stabilizer orders
  std::string path;                            // "classes" or "j-line"

  unsigned nu(unsigned ell) const { return ell == 2 ? nu2 : ell == 3 ? nu3 : 0; }
  mpz_class weight_denominator() const;
};

// distributions are memoized per process
void clear_distribution_cache();

TraceDistribution distribution(const FieldPtr& F, const LevelStructureSpec& H,
                               const EnumOptions& opt = {});
// level 1 only, p >= 5; Frobenius orbits of y^2 = x^3 + cx + c plus the j = 0, 1728 twists
TraceDistribution level_one_jline(const FieldPtr& F, const EnumOptions& opt = {});
TraceDistribution distribution_from_classes(const FieldPtr& F, const LevelStructureSpec& H,
                                            const EnumOptions& opt = {});

struct MomentTable {
  std::uint32_t p = 0;
  unsigned a = 0;
  FpPoly modulus;
  int N = 1;
  std::vector<Mat2> generators;
  unsigned maxK = 0;
  std::vector<mpz_class> moments;  // [a_1^k], k = 0..maxK

  std::string to_json() const;
  static MomentTable from_json(const std::string& text);
};

inline constexpr int kMomentCacheVersion = 1;

MomentTable moments(const TraceDistribution& D, unsigned maxK);
// reads/writes <cacheDir>/moments-<key>.json when cacheDir is non-empty
MomentTable moments(const FieldPtr& F, const LevelStructureSpec& H, unsigned maxK,
                    const std::string& cacheDir = "", const EnumOptions& opt = {},
                    unsigned maxWeight = kDefaultMaxWeight);

struct SplitMoments {
  unsigned ell = 0, s = 0;
  std::vector<mpq_class> momentsN, momentsU;
};
SplitMoments split_moments(const TraceDistribution& D, unsigned ell, unsigned s, unsigned maxK);

struct EisSpec {
  std::optional<mpz_class> evenValue, oddValue;
  std::optional<mpz_class> h0;  // F_q-rational components of the compact curve

  static EisSpec level_one();
  static EisSpec unknown() { return {}; }
};

struct TraceResult {
  std::uint64_t q = 0;
  int N = 1;
  unsigned weight = 0;       // k + 2
  mpz_class interior;        // -sum_j binom(k-j,j)(-q)^j [a_1^{k-2j}]
  std::optional<mpz_class> value;
  bool eisKnown = false;
};

// elliptic part only: equals Tr + eps_k + eis_k
mpz_class trace_interior(const MomentTable& M, std::uint64_t q, unsigned k);
mpz_class trace_interior(const TraceDistribution& D, unsigned k);
TraceResult trace(const TraceDistribution& D, unsigned k, const EisSpec& eis);
std::optional<mpz_class> eis_value(const EisSpec& eis, unsigned k);
std::optional<mpz_class> epsilon(const TraceDistribution& D, const EisSpec& eis, unsigned k);

struct SplitResult {
  unsigned ell = 0, s = 0, k = 0;
  mpz_class modulus;
  mpq_class N, U;  // exact, before reduction
  mpz_class Nmod, Umod;
  std::optional<mpz_class> reassembled;  // -eis - N - U mod ell^s, i.e. Tr + eps_k
};

// m_{ell,s}
std::uint64_t half_unit_order(unsigned ell, unsigned s);
mpz_class reduce_mod(const mpq_class& x, const mpz_class& m);

SplitResult split_trace(const TraceDistribution& D, unsigned k, unsigned ell, unsigned s,
                        const EisSpec& eis);
// the U-part with exponents not folded: sum over j of binom(k-j,j)(-q)^j a^{k-2j} on U
mpq_class unfolded_U(const TraceDistribution& D, unsigned k, unsigned ell);

struct RecurrenceSeed {
  unsigned ell = 0, i = 0;
  unsigned exponent = 0;     // t such that the congruence is taken mod ell^t
  std::vector<mpz_class> c;  // prod_{j=1}^i (x - j) = x^i + c[1] x^{i-1} + ... + c[i]
};

unsigned factorial_valuation(unsigned ell, unsigned i);
RecurrenceSeed faculty_recurrence(unsigned ell, unsigned i, int shift = 0);
// [a^k] + sum_j c_j [a^{k-j}] = 0 mod ell^t, extended from seeds [a^0..a^{i-1}] up to maxK
std::vector<mpz_class> moment_recurrence(const RecurrenceSeed& R, const std::vector<mpz_class>& seed,
                                         unsigned maxK);

// Hurwitz-Kronecker class number, weights 1/2 and 1/3 on the special forms
mpq_class kronecker_H(std::int64_t disc);
// primitive reduced forms, weighted
mpq_class weighted_primitive_class_number(std::int64_t disc);

}  // namespace modtrace
