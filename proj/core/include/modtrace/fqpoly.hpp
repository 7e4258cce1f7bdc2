#pragma once

#include <string>
#include <utility>
#include <vector>

#include "modtrace/ffield.hpp"

namespace modtrace {

// element of F_q[T], coefficients low to high, no trailing zeros
class FqPoly {
 public:
  using Elem = FqField::Elem;

  FqPoly() = default;
  FqPoly(FieldPtr F, std::vector<Elem> c);

  static FqPoly zero(FieldPtr F) { return FqPoly(std::move(F), {}); }
  static FqPoly constant(FieldPtr F, Elem c) { return FqPoly(std::move(F), {c}); }
  static FqPoly monomial(FieldPtr F, Elem c, unsigned deg);
  static FqPoly T(FieldPtr F) { return monomial(std::move(F), 1, 1); }
  // accepts sums of terms c*T^e with c an integer read mod p, e.g. "T^2+2T+1"
  static FqPoly parse(FieldPtr F, const std::string& s);

  const FieldPtr& field() const { return F_; }
  const std::vector<Elem>& coeffs() const { return c_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_monic() const { return !c_.empty() && c_.back() == 1; }
  Elem lc() const { return c_.empty() ? 0 : c_.back(); }
  Elem coeff(std::size_t i) const { return i < c_.size() ? c_[i] : 0; }

  FqPoly operator+(const FqPoly& o) const;
  FqPoly operator-(const FqPoly& o) const;
  FqPoly operator-() const;
  FqPoly operator*(const FqPoly& o) const;
  FqPoly scale(Elem c) const;
  std::pair<FqPoly, FqPoly> divmod(const FqPoly& d) const;
  FqPoly operator%(const FqPoly& d) const { return divmod(d).second; }
  FqPoly operator/(const FqPoly& d) const { return divmod(d).first; }
  FqPoly pow(std::uint64_t e) const;
  FqPoly powmod(std::uint64_t e, const FqPoly& m) const;
  FqPoly monic() const;
  Elem eval(Elem x) const;
  // evaluate with coefficients embedded into an extension field
  Elem eval_in(const FqField& L, Elem x) const;

  bool operator==(const FqPoly& o) const { return c_ == o.c_; }
  bool operator!=(const FqPoly& o) const { return c_ != o.c_; }
  bool operator<(const FqPoly& o) const;

  std::string str() const;
  // one F_p coordinate vector per F_q coefficient
  std::vector<std::vector<std::uint32_t>> coeff_arrays() const;

 private:
  void trim();
  void need(const FqPoly& o) const;
  FieldPtr F_;
  std::vector<Elem> c_;
};

FqPoly gcd(FqPoly a, FqPoly b);
bool is_irreducible(const FqPoly& f);
std::vector<FqPoly> monic_irreducibles(const FieldPtr& F, unsigned deg);
// |A/f| = q^deg f
std::uint64_t norm(const FqPoly& f);

}  // namespace modtrace
