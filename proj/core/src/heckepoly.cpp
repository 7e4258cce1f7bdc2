#include "modtrace/heckepoly.hpp"

#include "modtrace/congruences.hpp"

namespace modtrace {

unsigned dim_level1(unsigned weight) {
  if (weight % 2 || weight < 12) return 0;
  return weight % 12 == 2 ? weight / 12 - 1 : weight / 12;
}

mpz_class level1_trace(std::uint32_t p, unsigned n, unsigned weight, const EnumOptions& opt) {
  if (weight < 2) throw Error("weight must be at least 2");
  auto F = field(p, n, opt.maxField);
  auto D = distribution(F, LevelStructureSpec::level_one(), opt);
  return *trace(D, weight - 2, EisSpec::level_one()).value;
}

HeckeCharPoly charpoly_Tp(std::uint32_t p, unsigned weight, const EnumOptions& opt) {
  if (!is_prime(p)) throw Error("p must be prime");
  HeckeCharPoly R;
  R.p = p;
  R.weight = weight;
  R.dim = dim_level1(weight);
  R.poly = {1};
  R.frobPoly = {1};
  const unsigned d = R.dim;
  if (d == 0) return R;
  if (d > kMaxHeckeDim) throw BudgetError("dim S_k exceeds the Hecke degree cap " + std::to_string(kMaxHeckeDim));
  if (ipow(p, 2 * d) > mpz_class(static_cast<unsigned long>(opt.maxField)))
    throw BudgetError("F_{p^" + std::to_string(2 * d) + "} exceeds the field cap (raise with --max-field-size)");
  R.fieldDegree = 2 * d;

  // Newton: i c_i = -sum_{j=1}^i P_j c_{i-j}
  std::vector<mpz_class> P(2 * d + 1);
  for (unsigned n = 1; n <= 2 * d; ++n) P[n] = level1_trace(p, n, weight, opt);
  std::vector<mpq_class> c(2 * d + 1);
  c[0] = 1;
  for (unsigned i = 1; i <= 2 * d; ++i) {
    mpq_class s = 0;
    for (unsigned j = 1; j <= i; ++j) s += P[j] * c[i - j];
    c[i] = -s / i;
    c[i].canonicalize();
  }
  R.frobPoly.assign(2 * d + 1, 0);
  for (unsigned i = 0; i <= 2 * d; ++i) {
    if (c[i].get_den() != 1) throw Error("internal: det(1 - F x) is not integral");
    R.frobPoly[i] = c[i].get_num();
  }

  // prod (1 - a_i x + y x^2) = sum_j e_j (-x)^j (1 + y x^2)^{d-j}
  const mpz_class y = ipow(p, weight - 1);
  auto coeff = [&](const std::vector<mpz_class>& e, unsigned m) {
    mpz_class s = 0;
    for (unsigned j = 0; j <= std::min(m, d); ++j) {
      if ((m - j) % 2) continue;
      unsigned h = (m - j) / 2;
      if (h > d - j) continue;
      mpz_class t = e[j] * binomial(d - j, h) * ipow(y, h);
      s += j % 2 ? -t : t;
    }
    return s;
  };
  std::vector<mpz_class> e(d + 1, 0);
  e[0] = 1;
  for (unsigned m = 1; m <= d; ++m) {
    mpz_class rest = coeff(e, m);  // e[m] is still 0
    mpz_class v = R.frobPoly[m] - rest;
    e[m] = m % 2 ? -v : v;
  }
  for (unsigned m = d + 1; m <= 2 * d; ++m)
    if (coeff(e, m) != R.frobPoly[m]) throw Error("internal: det(1 - F x) breaks the functional equation");
  R.poly.assign(d + 1, 0);
  for (unsigned j = 0; j <= d; ++j) R.poly[j] = j % 2 ? -e[j] : e[j];
  return R;
}

unsigned slope0_mult(const HeckeCharPoly& f) {
  const mpz_class p = f.p;
  for (std::size_t i = f.poly.size(); i-- > 0;)
    if (!mpz_divisible_p(f.poly[i].get_mpz_t(), p.get_mpz_t())) return static_cast<unsigned>(i);
  return 0;
}

unsigned slope0_mult(std::uint32_t p, unsigned weight, const EnumOptions& opt) {
  return slope0_mult(charpoly_Tp(p, weight, opt));
}

bool congruent_mod(const std::vector<mpz_class>& f, const std::vector<mpz_class>& g, const mpz_class& p) {
  for (std::size_t i = 0; i < std::max(f.size(), g.size()); ++i) {
    mpz_class d = (i < f.size() ? f[i] : mpz_class(0)) - (i < g.size() ? g[i] : mpz_class(0));
    if (!mpz_divisible_p(d.get_mpz_t(), p.get_mpz_t())) return false;
  }
  return true;
}

}  // namespace modtrace
