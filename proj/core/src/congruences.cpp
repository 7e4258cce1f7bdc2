#include "modtrace/congruences.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include "json.hpp"

namespace modtrace {

void zp_trim(ZPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

ZPoly zp_add(const ZPoly& f, const ZPoly& g) {
  ZPoly r(std::max(f.size(), g.size()), 0);
  for (std::size_t i = 0; i < f.size(); ++i) r[i] += f[i];
  for (std::size_t i = 0; i < g.size(); ++i) r[i] += g[i];
  zp_trim(r);
  return r;
}

ZPoly zp_sub(const ZPoly& f, const ZPoly& g) {
  ZPoly r(std::max(f.size(), g.size()), 0);
  for (std::size_t i = 0; i < f.size(); ++i) r[i] += f[i];
  for (std::size_t i = 0; i < g.size(); ++i) r[i] -= g[i];
  zp_trim(r);
  return r;
}

ZPoly zp_mul(const ZPoly& f, const ZPoly& g) {
  if (f.empty() || g.empty()) return {};
  ZPoly r(f.size() + g.size() - 1, 0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] == 0) continue;
    for (std::size_t j = 0; j < g.size(); ++j) r[i + j] += f[i] * g[j];
  }
  zp_trim(r);
  return r;
}

ZPoly zp_pow(const ZPoly& f, unsigned e) {
  ZPoly r{1}, b = f;
  while (e) {
    if (e & 1) r = zp_mul(r, b);
    e >>= 1;
    if (e) b = zp_mul(b, b);
  }
  return r;
}

ZPoly zp_xn_minus_one(std::uint64_t n) {
  ZPoly r(n + 1, 0);
  r[0] = -1;
  r[n] += 1;
  zp_trim(r);
  return r;
}

std::optional<ZPoly> zp_divexact(const ZPoly& f0, const ZPoly& d0) {
  ZPoly f = f0, d = d0;
  zp_trim(f);
  zp_trim(d);
  if (d.empty()) throw Error("division by the zero polynomial");
  if (f.empty()) return ZPoly{};
  if (f.size() < d.size()) return std::nullopt;
  ZPoly q(f.size() - d.size() + 1, 0);
  for (std::size_t i = f.size(); i-- >= d.size();) {
    if (f[i] == 0) {
      if (i == d.size() - 1) break;
      continue;
    }
    if (!mpz_divisible_p(f[i].get_mpz_t(), d.back().get_mpz_t())) return std::nullopt;
    mpz_class c = f[i] / d.back();
    q[i - d.size() + 1] = c;
    for (std::size_t j = 0; j < d.size(); ++j) f[i - d.size() + 1 + j] -= c * d[j];
    if (i == d.size() - 1) break;
  }
  zp_trim(f);
  if (!f.empty()) return std::nullopt;
  zp_trim(q);
  return q;
}

ResiduePoly zp_reduce(const ZPoly& f, const mpz_class& m) { return ResiduePoly(m, f); }

mpz_class binomial(std::uint64_t n, std::uint64_t k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

mpz_class ipow(const mpz_class& b, std::uint64_t e) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

mpz_class ipow(std::uint64_t b, std::uint64_t e) { return ipow(mpz_class(static_cast<unsigned long>(b)), e); }

ResidueInt binom_mod(std::uint64_t k, std::uint64_t j, unsigned ell, unsigned s) {
  return ResidueInt(ipow(ell, s), j > k ? mpz_class(0) : binomial(k, j));
}

CoeffFamily::CoeffFamily(std::uint64_t q, std::uint64_t m) : q_(q), m_(m) {
  if (m == 0) throw Error("f_{r,m,k} needs m >= 1");
}

mpz_class CoeffFamily::value(std::int64_t r, std::uint64_t k) const {
  std::int64_t rr = r % static_cast<std::int64_t>(m_);
  if (rr < 0) rr += static_cast<std::int64_t>(m_);
  std::lock_guard<std::mutex> g(mu_);
  auto it = rows_.find(k);
  if (it == rows_.end()) {
    std::vector<mpz_class> row(m_, 0);
    const mpz_class mq = -mpz_class(static_cast<unsigned long>(q_));
    mpz_class pw = 1;
    const std::uint64_t h = k / 2;
    for (std::uint64_t j = 0; j <= h; ++j) {
      row[(h - j) % m_] += binomial(k - j, j) * pw;
      pw *= mq;
    }
    it = rows_.emplace(k, std::move(row)).first;
  }
  return it->second[static_cast<std::size_t>(rr)];
}

mpz_class f_coeff(std::uint64_t q, std::int64_t r, std::uint64_t m, std::uint64_t k) {
  return CoeffFamily(q, m).value(r, k);
}

ZPoly f_denominator(std::uint64_t q, std::uint64_t m) {
  ZPoly base{1, 0, mpz_class(static_cast<unsigned long>(q))};
  return zp_sub(zp_pow(base, static_cast<unsigned>(2 * m)), [&] {
    ZPoly x(2 * m + 1, 0);
    x[2 * m] = 1;
    return x;
  }());
}

ZPoly f_numerator(std::uint64_t q, std::int64_t r, std::uint64_t m, unsigned delta) {
  ZPoly den = f_denominator(q, m);
  const std::uint64_t bound = 4 * m - 2 - delta;
  const std::uint64_t K = bound + den.size() + 8;
  CoeffFamily fam(q, m);
  ZPoly series(K + 1, 0);
  for (std::uint64_t k = delta; k <= K; k += 2) series[k] = fam.value(r, k);
  ZPoly h(K + 1, 0);
  for (std::uint64_t i = 0; i <= K; ++i)
    for (std::size_t j = 0; j < den.size() && j <= i; ++j) h[i] += series[i - j] * den[j];
  for (std::uint64_t i = bound + 1; i <= K; ++i)
    if (h[i] != 0) throw Error("internal: numerator degree exceeds 4m-2-delta");
  h.resize(bound + 1);
  zp_trim(h);
  return h;
}

bool is_square_mod(const mpz_class& a, const mpz_class& m) {
  mpz_class r = a % m;
  if (r < 0) r += m;
  for (mpz_class x = 0; x < m; ++x)
    if ((x * x) % m == r) return true;
  return false;
}

std::string to_string(PeriodCase c) {
  switch (c) {
    case PeriodCase::OddNonSquare: return "odd-ell-nonsquare";
    case PeriodCase::OddSquare: return "odd-ell-square";
    case PeriodCase::TwoNonSquare: return "ell=2-nonsquare";
    case PeriodCase::TwoOddSquare: return "ell=2-odd-square";
    case PeriodCase::EllIsP: return "ell=p";
  }
  return "?";
}

PeriodSpec period_for(unsigned ell, unsigned s, std::uint64_t q, const LevelFlags& flags) {
  if (!is_prime(ell)) throw Error("ell must be prime");
  if (s == 0) throw Error("s must be positive");
  auto pp = as_prime_power(q);
  if (!pp) throw Error("q must be a prime power");
  PeriodSpec P;
  P.ell = ell;
  P.s = s;
  P.q = q;
  P.m = half_unit_order(ell, s);
  P.sEff = s;
  if (!flags.representable && (ell == 2 || ell == 3)) {
    P.shifted = true;
    if (ell == 2 && flags.minusId) {
      if (flags.nu == 0) throw Error("contradictory flags: -Id in H forces nu_2 >= 1");
      P.sEff = s - 1 + flags.nu;
    } else {
      P.sEff = s + flags.nu;
    }
  }
  const unsigned se = P.sEff;
  if (pp->p == ell) {
    P.caseTag = PeriodCase::EllIsP;
    P.n = ipow(ell, se - 1).get_ui() * (ell - 1);
    P.k0 = q == ell ? 2 * s - 1 : s;
    return P;
  }
  P.k0 = s - 1;
  if (ell >= 3) {
    if (is_square_mod(q, ell)) {
      P.caseTag = PeriodCase::OddSquare;
      P.n = ipow(ell, se).get_ui() * (ell * ell - 1) / 2;
    } else {
      P.caseTag = PeriodCase::OddNonSquare;
      P.n = ipow(ell, se - 1).get_ui() * (ell * ell - 1);
    }
    return P;
  }
  if (is_square_mod(q, ipow(2, se))) {
    P.caseTag = PeriodCase::TwoOddSquare;
    P.n = std::lcm<std::uint64_t>(2, ipow(2, se - 1).get_ui() * 3);
  } else {
    P.caseTag = PeriodCase::TwoNonSquare;
    P.n = ipow(2, se).get_ui() * 3;
  }
  return P;
}

LevelFlags level_flags(const TraceDistribution& D, unsigned ell) {
  return {D.H.representable, D.H.minusId, D.nu(ell)};
}

std::vector<mpz_class> sigma_residues(const TraceDistribution& D, const mpz_class& modulus,
                                      std::uint64_t kmax) {
  mpz_class L = D.weight_denominator();
  mpz_class Mz = L * modulus;
  if (!Mz.fits_slong_p() || Mz > (mpz_class(1) << 60)) throw Error("residue modulus too large");
  const __int128 M = Mz.get_si();
  const std::int64_t Li = L.get_si();
  struct Term {
    __int128 t, w, h1, h2;
  };
  std::vector<Term> terms;
  const __int128 qm = static_cast<__int128>(D.q % static_cast<std::uint64_t>(M));
  for (const auto& [t, w] : D.weight) {
    mpz_class n(w * L);
    n %= Mz;
    if (n < 0) n += Mz;
    __int128 tt = t % static_cast<std::int64_t>(M);
    if (tt < 0) tt += M;
    terms.push_back({tt, static_cast<__int128>(n.get_si()), 0, 0});
  }
  std::vector<mpz_class> out(kmax + 1);
  for (std::uint64_t k = 0; k <= kmax; ++k) {
    __int128 acc = 0;
    for (auto& T : terms) {
      __int128 h;
      if (k == 0) h = 1;
      else if (k == 1) h = T.t;
      else h = ((T.t * T.h1 - qm * T.h2) % M + M) % M;
      T.h2 = T.h1;
      T.h1 = h;
      acc = (acc + T.w * h) % M;
    }
    if (acc % Li != 0) throw Error("internal: weighted trace sum is not integral");
    out[k] = mpz_class(static_cast<long>(acc / Li));
  }
  return out;
}

PeriodReport verify_periodicity(const TraceDistribution& D, unsigned ell, unsigned s, std::uint64_t kmin,
                                std::uint64_t kmax, const EisSpec& eis) {
  PeriodReport R;
  R.spec = period_for(ell, s, D.q, level_flags(D, ell));
  R.N = D.H.N;
  R.H = D.H.name;
  if (kmin < R.spec.k0)
    throw Error("window starts at k=" + std::to_string(kmin) + " below the floor k0=" + std::to_string(R.spec.k0));
  if (kmax < kmin) throw Error("empty window");
  const mpz_class mod = ipow(ell, s);
  const std::uint64_t n = R.spec.n;
  R.eisKnown = eis.evenValue && eis.oddValue;
  if (!R.eisKnown && n % 2 == 1 && mod != 2)
    throw Error("odd period with unknown eis values: supply --eis-even/--eis-odd");
  R.comparison = R.eisKnown ? "Tr(k+2)+eps_k vs Tr(k+2+n), both mod ell^s"
                            : (n % 2 == 0 ? "elliptic sums only: eis cancels since n is even"
                                          : "elliptic sums only: ell^s = 2 so 1 = -1");
  auto sig = sigma_residues(D, mod, kmax + n);
  auto value = [&](std::uint64_t k) {
    mpz_class v = -sig[k];
    if (R.eisKnown) v -= *eis_value(eis, static_cast<unsigned>(k % 2));
    v %= mod;
    if (v < 0) v += mod;
    return v;
  };
  for (std::uint64_t k = kmin; k <= kmax; ++k) {
    PeriodCheck c;
    c.k = k;
    c.lhs = value(k);
    c.rhs = value(k + n);
    c.pass = c.lhs == c.rhs;
    if (!c.pass && !R.firstFailure) R.firstFailure = c;
    R.checks.push_back(c);
  }
  return R;
}

std::vector<std::string> PeriodReport::json_lines() const {
  std::vector<std::string> out;
  for (const auto& c : checks) {
    nlohmann::json j;
    j["ell"] = spec.ell;
    j["s"] = spec.s;
    j["q"] = spec.q;
    j["N"] = N;
    j["H"] = H;
    j["n"] = spec.n;
    j["k"] = c.k;
    j["lhs"] = c.lhs.get_str();
    j["rhs"] = c.rhs.get_str();
    j["pass"] = c.pass;
    out.push_back(j.dump());
  }
  return out;
}

CertificateResult periodic_certificate(const ZPoly& f0, const ZPoly& d0, std::uint64_t n, const mpz_class& modulus,
                                       std::uint64_t horizon) {
  CertificateResult C;
  ResiduePoly d = zp_reduce(d0, modulus), f = zp_reduce(f0, modulus);
  mpz_class inv0;
  if (!mpz_invert(inv0.get_mpz_t(), d.coeff(0).get_mpz_t(), modulus.get_mpz_t()) && modulus != 1)
    throw Error("constant term of d is not a unit: f/d is not a power series");
  auto div = poly_divides_mod(d, xn_minus_one(modulus, n));
  if (!div.divides) return C;
  C.divides = true;
  C.cofactor = div.quotient;
  if (horizon == 0) horizon = std::max(0, f.degree()) + 2 * n;
  std::vector<mpz_class> a(horizon + n + 1);
  for (std::size_t k = 0; k < a.size(); ++k) {
    mpz_class v = f.coeff(k);
    for (int i = 1; i <= d.degree() && static_cast<std::size_t>(i) <= k; ++i) v -= d.coeff(i) * a[k - i];
    v = (v * inv0) % modulus;
    if (v < 0) v += modulus;
    a[k] = v;
  }
  C.periodic = true;
  const std::int64_t start = static_cast<std::int64_t>(f.degree()) - d.degree() + 1;
  for (std::uint64_t k = static_cast<std::uint64_t>(std::max<std::int64_t>(0, start)); k <= horizon; ++k)
    if (a[k] != a[k + n]) {
      C.periodic = false;
      C.firstMismatch = k;
      break;
    }
  return C;
}

std::uint64_t n_U(unsigned ell, unsigned s, std::uint64_t q) {
  if (ell < 3 || q % ell == 0) throw Error("n_U needs ell >= 3 coprime to q");
  if (is_square_mod(q, ell)) return ipow(ell, s).get_ui() * (ell * ell - 1) / 2;
  return ipow(ell, s - 1).get_ui() * (ell * ell - 1);
}

std::uint64_t n_U_even(unsigned s) { return std::lcm<std::uint64_t>(2, ipow(2, s - 1).get_ui() * 3); }

std::uint64_t n_N(unsigned ell, unsigned s, std::uint64_t q) {
  std::uint64_t base = ipow(ell, s - 1).get_ui() * (ell - 1);
  if (ell == 2 && is_square_mod(q, ipow(2, s))) return std::lcm<std::uint64_t>(2, base);
  return 2 * base;
}

bool check_hformula(unsigned k) {
  // coefficient of x1^i x2^{k-i}; the left side has all coefficients 1
  for (unsigned i = 0; i <= k; ++i) {
    mpz_class c = 0;
    for (unsigned j = 0; 2 * j <= k; ++j) {
      if (i < j || i - j > k - 2 * j) continue;
      mpz_class term = binomial(k - j, j) * binomial(k - 2 * j, i - j);
      c += (j % 2 ? -term : term);
    }
    if (c != 1) return false;
  }
  return true;
}

bool check_lucas(std::uint64_t k, std::uint64_t j, unsigned ell, unsigned s) {
  std::uint64_t t = 0;
  if (j > 0) {
    t = s;
    for (std::uint64_t pw = ell; pw <= j; pw *= ell) ++t;
  }
  mpz_class shift = ipow(ell, t);
  mpz_class m = ipow(ell, s);
  mpz_class a = binomial(k, j) % m;
  mpz_class big;
  mpz_class top = shift + static_cast<unsigned long>(k);
  mpz_bin_ui(big.get_mpz_t(), top.get_mpz_t(), j);
  return a == big % m;
}

bool check_f_sum(std::uint64_t q, unsigned ell, unsigned s, unsigned t, std::int64_t r, std::uint64_t k) {
  const std::uint64_t ms = half_unit_order(ell, s), mt = half_unit_order(ell, t);
  CoeffFamily Fs(q, ms), Ft(q, mt);
  mpz_class lhs = 0;
  const std::uint64_t cnt = ipow(ell, s - t).get_ui();
  for (std::uint64_t i = 0; i < cnt; ++i) lhs += Fs.value(r + static_cast<std::int64_t>(i * mt), k);
  return lhs == Ft.value(r, k);
}

bool check_f_sum_even(std::uint64_t q, unsigned s, unsigned t, std::int64_t r, std::uint64_t k) {
  if (t >= 2) return check_f_sum(q, 2, s, t, r, k);
  const std::uint64_t ms = half_unit_order(2, s);
  CoeffFamily Fs(q, ms);
  mpz_class lhs = 0;
  for (std::uint64_t i = 0; i < ms; ++i) lhs += Fs.value(r + static_cast<std::int64_t>(i), k);
  return lhs == f_coeff(q, 0, 1, k);
}

bool check_n_U(std::uint64_t q, unsigned ell, unsigned s, unsigned t, std::int64_t r, std::uint64_t k) {
  CoeffFamily F(q, half_unit_order(ell, t));
  mpz_class m = ipow(ell, s + 1 - t);
  mpz_class d = F.value(r, k) - F.value(r, k + n_U(ell, s, q));
  return mpz_divisible_p(d.get_mpz_t(), m.get_mpz_t()) != 0;
}

bool check_n_U_even(std::uint64_t q, unsigned s, unsigned t, std::int64_t r, std::uint64_t k) {
  CoeffFamily F(q, half_unit_order(2, t));
  mpz_class m = ipow(2, s + 1 - t);
  mpz_class d = F.value(r, k) - F.value(r, k + n_U_even(s));
  return mpz_divisible_p(d.get_mpz_t(), m.get_mpz_t()) != 0;
}

std::optional<ZPoly> faculty_cofactor(unsigned ell, std::uint64_t n) {
  ZPoly xn1 = zp_xn_minus_one(n);
  ZPoly lhs = zp_sub(zp_pow(xn1, ell), zp_xn_minus_one(n * ell));
  ZPoly den = xn1;
  for (auto& c : den) c *= ell;
  auto g = zp_divexact(lhs, den);
  if (!g) return std::nullopt;
  if (static_cast<std::uint64_t>(static_cast<int>(g->size()) - 1) != n * (ell - 2)) return std::nullopt;
  return g;
}

bool check_rootofunity(unsigned ell, unsigned m) {
  if ((ell - 1) % m != 0) throw Error("no element of order m in F_ell^x");
  auto F = field(ell, 1);
  using Elem = FqField::Elem;
  Elem zeta = F->exp((ell - 1) / m);
  // prod (A - zeta^i B) as a polynomial in y = B/A
  std::vector<Elem> prod{1};
  Elem z = 1;
  for (unsigned i = 1; i <= m; ++i) {
    z = F->mul(z, zeta);
    std::vector<Elem> next(prod.size() + 1, 0);
    for (std::size_t j = 0; j < prod.size(); ++j) {
      next[j] = F->add(next[j], prod[j]);
      next[j + 1] = F->sub(next[j + 1], F->mul(z, prod[j]));
    }
    prod = std::move(next);
  }
  for (std::size_t j = 0; j < prod.size(); ++j) {
    Elem want = j == 0 ? 1 : (j == m ? F->neg(1) : 0);
    if (prod[j] != want) return false;
  }
  return true;
}

bool check_div_upgrade(const ZPoly& f, unsigned ell, unsigned m, std::uint64_t n, unsigned r) {
  mpz_class lo = ipow(ell, m), hi = ipow(ell, m + r);
  if (!poly_divides_mod(zp_reduce(f, lo), xn_minus_one(lo, n)).divides)
    throw Error("div_upgrade hypothesis fails: f does not divide x^n - 1 mod ell^m");
  return poly_divides_mod(zp_reduce(f, hi), xn_minus_one(hi, n * ipow(ell, r).get_ui())).divides;
}

bool check_ell_divides_q(std::uint64_t q, unsigned ell, unsigned s, unsigned t, std::int64_t r, std::uint64_t k) {
  auto pp = as_prime_power(q);
  if (!pp || pp->p != ell) throw Error("this branch needs ell | q");
  const std::uint64_t m = half_unit_order(ell, t);
  CoeffFamily F(q, m);
  const mpz_class Ms = ipow(ell, s);
  if (k >= 2 * ((s - 1) / pp->a)) {
    mpz_class trunc = 0;
    const std::uint64_t h = k / 2;
    const std::int64_t rr = ((r % static_cast<std::int64_t>(m)) + static_cast<std::int64_t>(m)) %
                            static_cast<std::int64_t>(m);
    for (std::uint64_t j = 0; j <= std::min<std::uint64_t>(s - 1, h); ++j)
      if ((static_cast<std::int64_t>(h) - static_cast<std::int64_t>(j) - rr) % static_cast<std::int64_t>(m) == 0)
        trunc += binomial(k - j, j) * ipow(-mpz_class(static_cast<unsigned long>(q)), j);
    mpz_class d = F.value(r, k) - trunc;
    if (!mpz_divisible_p(d.get_mpz_t(), Ms.get_mpz_t())) return false;
  }
  const std::uint64_t n = ipow(ell, s - 1).get_ui() * (ell - 1);
  mpz_class d = F.value(r, k) - F.value(r, k + n);
  mpz_class mt = ipow(ell, s + 1 - t);
  return mpz_divisible_p(d.get_mpz_t(), mt.get_mpz_t()) != 0;
}

}  // namespace modtrace

namespace modtrace {

std::vector<LemmaTally> lemma_suite(std::uint64_t seed, unsigned randomCases) {
  std::vector<LemmaTally> out;
  std::mt19937_64 rng(seed);
  auto run = [&](const std::string& name, auto&& body) {
    LemmaTally t;
    t.name = name;
    auto record = [&t](bool ok, const std::string& what) {
      ++t.cases;
      if (ok) return;
      if (!t.failures) t.firstFailure = what;
      ++t.failures;
    };
    body(record);
    out.push_back(t);
  };
  auto tag = [](std::initializer_list<std::uint64_t> v) {
    std::string s;
    for (auto x : v) s += (s.empty() ? "" : ",") + std::to_string(x);
    return s;
  };

  run("hformula", [&](auto& rec) {
    for (unsigned k = 0; k <= 20; ++k) rec(check_hformula(k), tag({k}));
  });
  run("lucas", [&](auto& rec) {
    const unsigned primes[] = {2, 3, 5, 7, 11};
    for (unsigned it = 0; it < randomCases; ++it) {
      unsigned ell = primes[rng() % 5];
      unsigned s = 1 + rng() % 3;
      std::uint64_t k = rng() % 400, j = rng() % (k / 2 + 1);
      rec(check_lucas(k, j, ell, s), tag({k, j, ell, s}));
    }
  });
  run("f_sum", [&](auto& rec) {
    for (std::uint64_t q : {2, 3, 4, 7, 8})
      for (unsigned ell : {3u, 5u}) {
        if (q % ell == 0) continue;
        for (unsigned s = 1; s <= 3; ++s)
          for (unsigned t = 1; t <= s; ++t)
            for (std::uint64_t k = 0; k < 30; k += 3)
              for (std::int64_t r = 0; r < 3; ++r)
                rec(check_f_sum(q, ell, s, t, r, k), tag({q, ell, s, t, std::uint64_t(r), k}));
      }
  });
  run("f_sum_even", [&](auto& rec) {
    for (std::uint64_t q : {3, 5, 7, 9})
      for (unsigned s = 1; s <= 3; ++s)
        for (unsigned t = 1; t <= s; ++t)
          for (std::uint64_t k = 0; k < 30; k += 3) rec(check_f_sum_even(q, s, t, 0, k), tag({q, s, t, k}));
  });
  run("n_U", [&](auto& rec) {
    for (std::uint64_t q : {2, 4, 7, 11})
      for (unsigned ell : {3u, 5u}) {
        if (q % ell == 0) continue;
        for (unsigned s = 1; s <= 2; ++s)
          for (unsigned t = 1; t <= s; ++t)
            for (std::uint64_t k = 0; k < 40; k += 5)
              for (std::int64_t r = 0; r < 2; ++r)
                rec(check_n_U(q, ell, s, t, r, k), tag({q, ell, s, t, std::uint64_t(r), k}));
      }
  });
  run("n_U_even", [&](auto& rec) {
    for (std::uint64_t q : {3, 5, 7, 9})
      for (unsigned s = 1; s <= 3; ++s)
        for (unsigned t = 1; t <= s; ++t)
          for (std::uint64_t k = 0; k < 40; k += 3) rec(check_n_U_even(q, s, t, 0, k), tag({q, s, t, k}));
  });
  run("denominator_certificate", [&](auto& rec) {
    for (unsigned ell : {3u, 5u})
      for (std::uint64_t q : {2, 3, 4, 6, 7, 11, 14}) {
        if (q % ell == 0) continue;
        for (unsigned s = 1; s <= 2; ++s)
          for (unsigned t = 1; t <= s; ++t) {
            std::uint64_t m = half_unit_order(ell, t);
            auto c = periodic_certificate(f_numerator(q, 0, m, 0), f_denominator(q, m), n_U(ell, s, q),
                                          ipow(ell, s + 1 - t));
            rec(c.divides && c.periodic, tag({ell, q, s, t}));
          }
      }
  });
  run("div_upgrade", [&](auto& rec) {
    for (unsigned it = 0; it < 40; ++it) {
      unsigned ell = it % 2 ? 3 : 5;
      unsigned m = 1 + rng() % 2, r = 1 + rng() % 2;
      ZPoly f{1, 0, -1};
      mpz_class lm = ipow(ell, m);
      f[0] += lm * static_cast<long>(rng() % 5);
      f[1] += lm * static_cast<long>(rng() % 5);
      rec(check_div_upgrade(f, ell, m, 2, r), tag({ell, m, r}));
    }
  });
  run("faculty_division", [&](auto& rec) {
    for (unsigned ell : {2u, 3u, 5u, 7u})
      for (std::uint64_t n : {1, 2, 3, 6}) {
        auto g = faculty_cofactor(ell, n);
        rec(g && g->size() == n * (ell - 2) + 1, tag({ell, n}));
      }
  });
  run("rootofunity", [&](auto& rec) {
    for (unsigned ell : {3u, 5u, 7u, 11u, 13u})
      for (unsigned m = 2; m < ell; ++m)
        if ((ell - 1) % m == 0) rec(check_rootofunity(ell, m), tag({ell, m}));
  });
  run("ell_divides_q", [&](auto& rec) {
    for (auto [q, ell] : std::vector<std::pair<std::uint64_t, unsigned>>{{2, 2}, {4, 2}, {3, 3}, {9, 3}, {5, 5}})
      for (unsigned s = 1; s <= 2; ++s)
        for (std::uint64_t k = 0; k < 30; ++k) rec(check_ell_divides_q(q, ell, s, s, 0, k), tag({q, ell, s, k}));
  });
  return out;
}

}  // namespace modtrace
