#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace modtrace {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// thrown when a configured cap is exceeded; message names the cap and the CLI flag
struct BudgetError : Error {
  using Error::Error;
};

inline constexpr std::uint64_t kDefaultMaxFieldSize = std::uint64_t(1) << 20;

bool is_prime(std::uint64_t n);
std::vector<std::uint64_t> prime_factors(std::uint64_t n);

struct PrimePower {
  std::uint32_t p = 0;
  unsigned a = 0;
  std::uint64_t q = 0;
};

PrimePower make_prime_power(std::uint64_t p, unsigned a);
std::optional<PrimePower> as_prime_power(std::uint64_t q);

// dense polynomials over F_p, coefficients low to high
using FpPoly = std::vector<std::uint32_t>;

bool fp_is_irreducible(const FpPoly& f, std::uint32_t p);
FpPoly lex_least_irreducible(std::uint32_t p, unsigned a);

class FqField;
using FieldPtr = std::shared_ptr<const FqField>;

// F_{p^a} with the lex-least monic irreducible modulus. An element is the
// integer sum c_i p^i of its coordinates in the power basis of x.
class FqField {
 public:
  using Elem = std::uint32_t;

  static FieldPtr make(std::uint32_t p, unsigned a,
                       std::uint64_t maxSize = kDefaultMaxFieldSize);

  std::uint32_t p() const { return base_.p; }
  unsigned degree() const { return base_.a; }
  std::uint32_t size() const { return static_cast<std::uint32_t>(base_.q); }
  const PrimePower& base() const { return base_; }
  const FpPoly& modulus() const { return modulus_; }

  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  Elem gen() const;
  Elem primitive() const { return exp_[1]; }

  Elem from_int(std::int64_t v) const;
  Elem from_mpz(const mpz_class& v) const;
  Elem from_coeffs(const FpPoly& c) const;
  FpPoly coeffs(Elem e) const;
  // value of a prime-field element as an integer in [0, p)
  std::uint32_t to_prime(Elem e) const;
  bool in_prime_field(Elem e) const { return e < base_.p; }

  Elem add(Elem x, Elem y) const {
    if (base_.p == 2) return x ^ y;
    return add_slow(x, y);
  }
  Elem neg(Elem x) const;
  Elem sub(Elem x, Elem y) const { return add(x, neg(y)); }
  Elem mul(Elem x, Elem y) const {
    if (x == 0 || y == 0) return 0;
    return exp_[log_[x] + log_[y]];
  }
  Elem sqr(Elem x) const { return mul(x, x); }
  Elem inv(Elem x) const;
  Elem div(Elem x, Elem y) const { return mul(x, inv(y)); }
  Elem pow(Elem x, std::int64_t e) const;
  Elem frob(Elem x) const { return pow(x, base_.p); }
  Elem scalar(std::int64_t c, Elem x) const { return mul(from_int(c), x); }

  // discrete log with respect to primitive(); x must be nonzero
  std::uint32_t log(Elem x) const;
  Elem exp(std::uint64_t e) const { return exp_[e % (base_.q - 1)]; }

  // quadratic character for odd p (0 at 0)
  int chi(Elem x) const;
  bool is_square(Elem x) const;
  std::optional<Elem> sqrt(Elem x) const;
  std::uint32_t abs_trace(Elem x) const;
  // z with z^2 + z = w in characteristic 2
  std::optional<Elem> artin_schreier(Elem w) const;

  std::string describe() const;

 private:
  FqField() = default;
  Elem add_slow(Elem x, Elem y) const;
  Elem mul_poly(Elem x, Elem y) const;

  PrimePower base_;
  FpPoly modulus_;
  std::vector<Elem> exp_;  // length 2(q-1)
  std::vector<std::uint32_t> log_;
  std::uint32_t chunk_ = 1;
  unsigned chunkDigits_ = 1;
  std::vector<std::uint32_t> chunkAdd_;
  std::vector<std::uint32_t> chunkNeg_;
  std::vector<std::uint8_t> trace_;
  std::vector<std::int64_t> as_;
};

// cached construction; fields are immutable and shared
FieldPtr field(std::uint32_t p, unsigned a,
               std::uint64_t maxSize = kDefaultMaxFieldSize);

// image of the source generator: lex-least root of src.modulus() in dst
FqField::Elem generator_image(const FqField& src, const FqField& dst);
FqField::Elem embed(const FqField& src, FqField::Elem e, const FqField& dst);

// Z/m with the modulus carried by every value
class ResidueInt {
 public:
  ResidueInt(mpz_class modulus, mpz_class value);
  const mpz_class& modulus() const { return m_; }
  const mpz_class& value() const { return v_; }
  bool is_unit() const;
  ResidueInt inverse() const;
  ResidueInt operator+(const ResidueInt& o) const;
  ResidueInt operator-(const ResidueInt& o) const;
  ResidueInt operator*(const ResidueInt& o) const;
  ResidueInt operator-() const;
  bool operator==(const ResidueInt& o) const;

 private:
  void check(const ResidueInt& o) const;
  mpz_class m_, v_;
};

// polynomial over Z/m, coefficients low to high, trailing zeros stripped
class ResiduePoly {
 public:
  ResiduePoly(mpz_class modulus, std::vector<mpz_class> coeffs);
  const mpz_class& modulus() const { return m_; }
  const std::vector<mpz_class>& coeffs() const { return c_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  mpz_class coeff(std::size_t i) const { return i < c_.size() ? c_[i] : mpz_class(0); }
  ResiduePoly operator+(const ResiduePoly& o) const;
  ResiduePoly operator-(const ResiduePoly& o) const;
  ResiduePoly operator*(const ResiduePoly& o) const;
  bool operator==(const ResiduePoly& o) const { return m_ == o.m_ && c_ == o.c_; }
  std::string str() const;

 private:
  void check(const ResiduePoly& o) const;
  mpz_class m_;
  std::vector<mpz_class> c_;
};

struct DivisionResult {
  bool divides = false;
  std::optional<ResiduePoly> quotient;
  std::optional<ResiduePoly> remainder;
};

// f = d*h over Z/m; d needs a unit leading coefficient
DivisionResult poly_divides_mod(const ResiduePoly& d, const ResiduePoly& f);

// x^n - 1 over Z/m
ResiduePoly xn_minus_one(const mpz_class& m, std::uint64_t n);

}  // namespace modtrace
