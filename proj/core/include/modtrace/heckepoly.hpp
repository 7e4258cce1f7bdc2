#pragma once

#include <cstdint>
#include <vector>

#include <gmpxx.h>

#include "modtrace/elltrace.hpp"

namespace modtrace {

// det(1 - T(p) x | S_weight(SL2(Z))), coefficients ascending
struct HeckeCharPoly {
  std::uint32_t p = 0;
  unsigned weight = 0;
  unsigned dim = 0;
  std::vector<mpz_class> poly;
  std::vector<mpz_class> frobPoly;  // det(1 - F_p x) of degree 2 dim
  unsigned fieldDegree = 0;         // largest n with F_{p^n} enumerated
};

inline constexpr unsigned kMaxHeckeDim = 4;

unsigned dim_level1(unsigned weight);

// Tr(F_{p^n} | S_weight) at level one
mpz_class level1_trace(std::uint32_t p, unsigned n, unsigned weight, const EnumOptions& opt = {});

HeckeCharPoly charpoly_Tp(std::uint32_t p, unsigned weight, const EnumOptions& opt = {});

// degree of the reduction mod p
unsigned slope0_mult(const HeckeCharPoly& f);
unsigned slope0_mult(std::uint32_t p, unsigned weight, const EnumOptions& opt = {});

// f and g agree coefficientwise mod p
bool congruent_mod(const std::vector<mpz_class>& f, const std::vector<mpz_class>& g, const mpz_class& p);

}  // namespace modtrace
