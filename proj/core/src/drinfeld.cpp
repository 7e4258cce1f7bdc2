#include "modtrace/drinfeld.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <thread>

#include "json.hpp"

namespace modtrace {

using Elem = FqField::Elem;
using u64 = std::uint64_t;

namespace {

u64 upow(u64 b, unsigned e) {
  u64 r = 1;
  while (e--) r *= b;
  return r;
}

// row reduction over F_p; returns pivot columns, matrix left in rref
std::vector<std::size_t> rref(std::vector<std::vector<std::uint32_t>>& A, std::size_t cols,
                              std::uint32_t p) {
  std::vector<std::size_t> piv;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < A.size(); ++c) {
    std::size_t sel = r;
    while (sel < A.size() && A[sel][c] == 0) ++sel;
    if (sel == A.size()) continue;
    std::swap(A[r], A[sel]);
    u64 inv = 1;
    for (u64 b = A[r][c], e = p - 2; e; e >>= 1, b = b * b % p)
      if (e & 1) inv = inv * b % p;
    for (auto& x : A[r]) x = static_cast<std::uint32_t>(x * inv % p);
    for (std::size_t i = 0; i < A.size(); ++i) {
      if (i == r || A[i][c] == 0) continue;
      u64 f = A[i][c];
      for (std::size_t j = 0; j < A[i].size(); ++j)
        A[i][j] = static_cast<std::uint32_t>((A[i][j] + (p - f) * A[r][j]) % p);
    }
    piv.push_back(c);
    ++r;
  }
  return piv;
}

std::vector<std::vector<std::uint32_t>> nullspace(std::vector<std::vector<std::uint32_t>> A,
                                                  std::size_t cols, std::uint32_t p) {
  auto piv = rref(A, cols, p);
  std::vector<bool> isPiv(cols, false);
  for (auto c : piv) isPiv[c] = true;
  std::vector<std::vector<std::uint32_t>> out;
  for (std::size_t f = 0; f < cols; ++f) {
    if (isPiv[f]) continue;
    std::vector<std::uint32_t> v(cols, 0);
    v[f] = 1;
    for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = (p - A[i][f]) % p;
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<std::uint32_t> padded(const FpPoly& c, std::size_t n) {
  std::vector<std::uint32_t> v(n, 0);
  for (std::size_t i = 0; i < c.size() && i < n; ++i) v[i] = c[i];
  return v;
}

Elem unit_elem(const FqField& F, unsigned t) {
  FpPoly c(t + 1, 0);
  c[t] = 1;
  return F.from_coeffs(c);
}

// all polynomials of degree < d over F, in mixed-radix order
std::vector<FqPoly> residues(const FieldPtr& F, unsigned d) {
  u64 total = upow(F->size(), d);
  std::vector<FqPoly> out;
  out.reserve(total);
  for (u64 i = 0; i < total; ++i) {
    std::vector<Elem> c(d, 0);
    u64 t = i;
    for (unsigned j = 0; j < d; ++j) {
      c[j] = static_cast<Elem>(t % F->size());
      t /= F->size();
    }
    out.emplace_back(F, c);
  }
  return out;
}

Elem fq_weight(const FqField& Fq, u64 autOrder) {
  return Fq.inv(Fq.from_int(static_cast<std::int64_t>(autOrder % Fq.p())));
}

}  // namespace

DrinfeldParams DrinfeldParams::make(FieldPtr Fq, const FqPoly& P, unsigned n, u64 maxField) {
  if (n == 0) throw Error("n must be positive");
  if (!P.is_monic() || !is_irreducible(P)) throw Error("P must be monic irreducible: " + P.str());
  DrinfeldParams D;
  D.Fq = Fq;
  D.P = P;
  D.n = n;
  D.m = n * static_cast<unsigned>(P.degree());
  D.L = field(Fq->p(), Fq->degree() * D.m, maxField);
  D.wp = P.pow(n);
  bool found = false;
  for (Elem x = 0; x < D.L->size() && !found; ++x)
    if (P.eval_in(*D.L, x) == 0) {
      D.gammaT = x;
      found = true;
    }
  if (!found) throw Error("no root of P in L");
  return D;
}

DrinfeldParams DrinfeldParams::make(u64 q, const std::string& P, unsigned n, u64 maxField) {
  auto pp = as_prime_power(q);
  if (!pp) throw Error("q must be a prime power, got " + std::to_string(q));
  auto F = field(pp->p, pp->a, maxField);
  return make(F, FqPoly::parse(F, P), n, maxField);
}

Elem DrinfeldParams::lift(Elem c) const { return embed(*Fq, c, *L); }

std::string DrinfeldParams::describe() const {
  return "q=" + std::to_string(q()) + " P=" + P.str() + " n=" + std::to_string(n);
}

Twisted tw_trim(Twisted a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
  return a;
}

Twisted tw_add(const FqField& L, const Twisted& a, const Twisted& b) {
  Twisted r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i)
    r[i] = L.add(i < a.size() ? a[i] : 0, i < b.size() ? b[i] : 0);
  return tw_trim(std::move(r));
}

Twisted tw_mul(const FqField& L, u64 q, const Twisted& a, const Twisted& b) {
  if (a.empty() || b.empty()) return {};
  Twisted r(a.size() + b.size() - 1, 0);
  Twisted bq = b;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != 0)
      for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = L.add(r[i + j], L.mul(a[i], bq[j]));
    for (auto& x : bq) x = L.pow(x, static_cast<std::int64_t>(q));
  }
  return tw_trim(std::move(r));
}

Twisted phi_T(const DrinfeldParams& P, Elem g, Elem delta) {
  return tw_trim({P.gammaT, g, delta});
}

Twisted phi_of(const DrinfeldParams& P, Elem g, Elem delta, const FqPoly& a) {
  Twisted t = phi_T(P, g, delta), r;
  for (std::size_t i = a.coeffs().size(); i-- > 0;) {
    r = tw_mul(*P.L, P.q(), r, t);
    r = tw_add(*P.L, r, Twisted{P.lift(a.coeffs()[i])});
  }
  return r;
}

bool frobenius_relation_holds(const DrinfeldParams& P, Elem g, Elem delta, const FrobeniusPoly& f) {
  const FqField& L = *P.L;
  Twisted lhs(2 * P.m + 1, 0);
  lhs[2 * P.m] = 1;
  Twisted bw = phi_of(P, g, delta, P.wp);
  for (auto& x : bw) x = L.mul(x, P.lift(f.b));
  lhs = tw_add(L, lhs, bw);
  Twisted rhs = phi_of(P, g, delta, f.a);
  rhs.insert(rhs.begin(), P.m, 0);
  return tw_trim(lhs) == tw_trim(rhs);
}

namespace {

// unique F_q solution of sum_i x_i cols[i] = rhs, matching tau-coefficients
std::optional<std::vector<Elem>> solve_fq(const DrinfeldParams& P, const std::vector<Twisted>& cols,
                                          const Twisted& rhs, bool& consistent) {
  const FqField& L = *P.L;
  const unsigned aq = P.Fq->degree(), aL = L.degree();
  std::size_t len = rhs.size();
  for (auto& c : cols) len = std::max(len, c.size());
  const std::size_t nvar = cols.size() * aq;
  std::vector<std::vector<std::uint32_t>> A(len * aL, std::vector<std::uint32_t>(nvar + 1, 0));
  for (std::size_t ci = 0; ci < cols.size(); ++ci)
    for (unsigned tt = 0; tt < aq; ++tt) {
      Elem beta = P.lift(unit_elem(*P.Fq, tt));
      for (std::size_t j = 0; j < cols[ci].size(); ++j) {
        auto co = padded(L.coeffs(L.mul(beta, cols[ci][j])), aL);
        for (unsigned r = 0; r < aL; ++r) A[j * aL + r][ci * aq + tt] = co[r];
      }
    }
  for (std::size_t j = 0; j < rhs.size(); ++j) {
    auto co = padded(L.coeffs(rhs[j]), aL);
    for (unsigned r = 0; r < aL; ++r) A[j * aL + r][nvar] = co[r];
  }
  auto piv = rref(A, nvar + 1, P.p());
  consistent = piv.empty() || piv.back() != nvar;
  if (!consistent || piv.size() != nvar) return std::nullopt;
  std::vector<std::uint32_t> x(nvar, 0);
  for (std::size_t i = 0; i < piv.size(); ++i) x[piv[i]] = A[i][nvar];
  std::vector<Elem> out;
  for (std::size_t ci = 0; ci < cols.size(); ++ci)
    out.push_back(P.Fq->from_coeffs(FpPoly(x.begin() + ci * aq, x.begin() + (ci + 1) * aq)));
  return out;
}

}  // namespace

FrobeniusPoly frobenius_poly(const DrinfeldParams& P, Elem g, Elem delta) {
  if (delta == 0) throw Error("Delta must be nonzero");
  const FqField& L = *P.L;
  const unsigned D = P.m / 2;

  // columns: phi_T^i tau^m for i <= D, then -phi_wp
  std::vector<Twisted> pows, cols;
  Twisted t = phi_T(P, g, delta), pw{1};
  for (unsigned i = 0; i <= D; ++i) {
    pows.push_back(pw);
    Twisted c = pw;
    c.insert(c.begin(), P.m, 0);
    cols.push_back(c);
    pw = tw_mul(L, P.q(), pw, t);
  }
  Twisted w = phi_of(P, g, delta, P.wp);
  for (auto& x : w) x = L.neg(x);
  cols.push_back(w);
  Twisted rhs(2 * P.m + 1, 0);
  rhs[2 * P.m] = 1;

  bool ok = false;
  FrobeniusPoly f;
  if (auto x = solve_fq(P, cols, rhs, ok)) {
    f.b = x->back();
    x->pop_back();
    f.a = FqPoly(P.Fq, *x);
  } else {
    if (!ok) throw Error("Frobenius system has no solution");
    // kernel only when tau^m = phi_c; then the polynomial is (X - c)^2
    Twisted tm(P.m + 1, 0);
    tm[P.m] = 1;
    auto c = solve_fq(P, pows, tm, ok);
    if (!c) throw Error("Frobenius system has no unique solution");
    FqPoly cp(P.Fq, *c);
    auto [qt, rm] = (cp * cp).divmod(P.wp);
    if (!rm.is_zero() || qt.degree() != 0) throw Error("Frobenius in A but c^2 / wp not a unit");
    f.a = cp.scale(P.Fq->from_int(2));
    f.b = qt.coeff(0);
  }
  if (f.b == 0) throw Error("Frobenius system gives b = 0");
  if (!frobenius_relation_holds(P, g, delta, f)) throw Error("Frobenius relation fails on re-substitution");
  return f;
}

std::vector<DrinfeldClass> enumerate_classes(const DrinfeldParams& P, unsigned threads) {
  const FqField& L = *P.L;
  const u64 q = P.q(), N = L.size() - 1;
  const u64 G = std::gcd(N, q * q - 1);
  const u64 i0 = N / G;
  // residual action on g once Delta is normalized
  const Elem mu = L.exp(i0 * (q - 1) % N);

  std::vector<DrinfeldClass> out;
  for (u64 e0 = 0; e0 < G; ++e0) {
    Elem delta = L.exp(e0);
    for (Elem g = 0; g < L.size(); ++g) {
      bool canon = true;
      for (Elem h = L.mul(g, mu); h != g; h = L.mul(h, mu))
        if (h < g) {
          canon = false;
          break;
        }
      if (!canon) continue;
      DrinfeldClass c;
      c.g = g;
      c.delta = delta;
      c.autOrder = g == 0 ? G : std::gcd(N, q - 1);
      c.orbitSize = N / c.autOrder;
      if (c.autOrder % P.p() != P.p() - 1) throw Error("automorphism count not -1 mod p");
      out.push_back(c);
    }
  }
  u64 total = 0;
  for (auto& c : out) total += c.orbitSize;
  if (total != u64(L.size()) * N) throw Error("orbit sizes do not partition L x L^*");

  threads = std::max(1u, threads);
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errs(threads);
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < out.size(); i += threads) {
          auto f = frobenius_poly(P, out[i].g, out[i].delta);
          out[i].frobA = f.a;
          out[i].frobB = f.b;
        }
      } catch (...) {
        errs[t] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  return out;
}

TorsionFrobenius torsion_frobenius(const DrinfeldParams& P, Elem g, Elem delta, const FqPoly& aux) {
  if (!aux.is_monic() || !is_irreducible(aux)) throw Error("auxiliary prime must be monic irreducible");
  if ((P.wp % aux).is_zero()) throw Error("auxiliary prime divides wp");
  const FieldPtr& L = P.L;
  const std::uint32_t p = P.p();
  const unsigned aL = L->degree(), dAux = static_cast<unsigned>(aux.degree());
  const unsigned want = 2 * dAux * P.Fq->degree();
  const u64 q = P.q();
  const Twisted phiAux = phi_of(P, g, delta, aux);
  const u64 rMax = upow(q, 2 * dAux) - 1;

  for (unsigned r = 1; r <= rMax; ++r) {
    // lex-first monic irreducible of degree r over L
    FqPoly h;
    for (u64 idx = 0;; ++idx) {
      std::vector<Elem> c(r + 1, 0);
      u64 t = idx;
      for (unsigned j = 0; j < r; ++j) {
        c[j] = static_cast<Elem>(t % L->size());
        t /= L->size();
      }
      c[r] = 1;
      FqPoly cand(L, c);
      if (is_irreducible(cand)) {
        h = cand;
        break;
      }
    }
    auto apply = [&](const Twisted& tw, const FqPoly& v) {
      FqPoly acc = FqPoly::zero(L), cur = v;
      for (std::size_t i = 0; i < tw.size(); ++i) {
        if (i) cur = cur.powmod(q, h);
        acc = acc + cur.scale(tw[i]);
      }
      return acc % h;
    };
    auto coords = [&](const FqPoly& v) {
      std::vector<std::uint32_t> out;
      for (unsigned j = 0; j < r; ++j) {
        auto c = padded(L->coeffs(v.coeff(j)), aL);
        out.insert(out.end(), c.begin(), c.end());
      }
      return out;
    };
    auto from_coords = [&](const std::vector<std::uint32_t>& x) {
      std::vector<Elem> c(r, 0);
      for (unsigned j = 0; j < r; ++j) c[j] = L->from_coeffs(FpPoly(x.begin() + j * aL, x.begin() + (j + 1) * aL));
      return FqPoly(L, c);
    };
    const std::size_t dim = std::size_t(aL) * r;
    std::vector<std::vector<std::uint32_t>> A(dim, std::vector<std::uint32_t>(dim, 0));
    for (unsigned j = 0; j < r; ++j)
      for (unsigned tt = 0; tt < aL; ++tt) {
        FqPoly v = FqPoly::monomial(L, unit_elem(*L, tt), j);
        auto col = coords(apply(phiAux, v));
        for (std::size_t i = 0; i < dim; ++i) A[i][j * aL + tt] = col[i];
      }
    auto ker = nullspace(A, dim, p);
    if (ker.size() < want) continue;
    if (ker.size() > want) throw Error("torsion larger than expected");

    const Twisted phiT = phi_T(P, g, delta);
    auto act = [&](const FqPoly& c, const FqPoly& e) {
      FqPoly acc = FqPoly::zero(L);
      for (std::size_t i = c.coeffs().size(); i-- > 0;)
        acc = (apply(phiT, acc) + e.scale(P.lift(c.coeffs()[i]))) % h;
      return acc;
    };
    auto res = residues(P.Fq, dAux);
    FqPoly e1 = from_coords(ker[0]);
    std::vector<FqPoly> W1;
    for (auto& c : res) W1.push_back(act(c, e1));
    FqPoly e2;
    bool found = false;
    for (auto& v : ker) {
      FqPoly cand = from_coords(v);
      if (std::find(W1.begin(), W1.end(), cand) == W1.end()) {
        e2 = cand;
        found = true;
        break;
      }
    }
    if (!found) throw Error("torsion is not free of rank 2");
    std::map<std::vector<Elem>, std::pair<std::size_t, std::size_t>> where;
    std::vector<FqPoly> W2;
    for (auto& c : res) W2.push_back(act(c, e2));
    for (std::size_t i = 0; i < res.size(); ++i)
      for (std::size_t j = 0; j < res.size(); ++j) where[(W1[i] + W2[j]).coeffs()] = {i, j};
    auto locate = [&](const FqPoly& v) {
      auto it = where.find(v.coeffs());
      if (it == where.end()) throw Error("Frobenius image outside torsion");
      return std::make_pair(res[it->second.first], res[it->second.second]);
    };
    auto [c11, c21] = locate(e1.powmod(L->size(), h));
    auto [c12, c22] = locate(e2.powmod(L->size(), h));
    TorsionFrobenius T;
    T.aux = aux;
    T.trace = (c11 + c22) % aux;
    T.det = (c11 * c22 - c12 * c21) % aux;
    T.extDegree = r;
    return T;
  }
  throw Error("no splitting extension found for the torsion");
}

std::uint32_t binom_mod_p(u64 n, u64 k, std::uint32_t p) {
  u64 r = 1;
  while (n || k) {
    u64 a = n % p, b = k % p;
    if (b > a) return 0;
    u64 num = 1, den = 1;
    for (u64 i = 0; i < b; ++i) {
      num = num * ((a - i) % p) % p;
      den = den * ((i + 1) % p) % p;
    }
    u64 inv = 1;
    for (u64 bb = den, e = p - 2; e; e >>= 1, bb = bb * bb % p)
      if (e & 1) inv = inv * bb % p;
    r = r * num % p * inv % p;
    n /= p;
    k /= p;
  }
  return static_cast<std::uint32_t>(r);
}

unsigned type_index(std::int64_t l, u64 q) {
  std::int64_t m = static_cast<std::int64_t>(q) - 1;
  std::int64_t r = ((l - 1) % m + m) % m;
  return static_cast<unsigned>(r);  // l = r + 1
}

CLTable::CLTable(const DrinfeldParams& P, const std::vector<DrinfeldClass>& classes, unsigned maxK,
                 std::optional<FqPoly> modulus)
    : P_(&P), maxK_(maxK), modulus_(std::move(modulus)) {
  const FqField& Fq = *P.Fq;
  const u64 q = P.q();
  c_.assign(maxK + 1, std::vector<FqPoly>(q - 1, FqPoly::zero(P.Fq)));
  for (auto& cl : classes) {
    Elem w = fq_weight(Fq, cl.autOrder);
    FqPoly a = reduce(cl.frobA), ak = FqPoly::constant(P.Fq, w);
    for (unsigned k = 0; k <= maxK; ++k) {
      for (unsigned li = 0; li + 1 < q; ++li) {
        std::int64_t e = static_cast<std::int64_t>(li + 1) - k - 1;
        c_[k][li] = c_[k][li] + ak.scale(Fq.pow(cl.frobB, e));
      }
      ak = reduce(ak * a);
    }
  }
  FqPoly mw = reduce(-P.wp);
  wpPow_.push_back(reduce(FqPoly::constant(P.Fq, 1)));
  for (unsigned j = 1; 2 * j <= maxK; ++j) wpPow_.push_back(reduce(wpPow_.back() * mw));
}

const FqPoly& CLTable::c(unsigned k, std::int64_t l) const {
  if (k > maxK_) throw Error("CLTable queried beyond its range");
  return c_[k][type_index(l, P_->q())];
}

FqPoly CLTable::trace(unsigned k, std::int64_t l) const {
  FqPoly acc = FqPoly::zero(P_->Fq);
  for (unsigned j = 0; 2 * j <= k; ++j) {
    std::uint32_t b = binom_mod_p(k - j, j, P_->p());
    if (b == 0) continue;
    acc = acc + reduce(wpPow_[j] * c(k - 2 * j, l - j)).scale(P_->Fq->from_int(b));
  }
  return -acc;
}

bool CLTable::in_prime_field(unsigned k, std::int64_t l) const {
  const FqPoly& f = c(k, l);
  return f.degree() <= 0 && P_->Fq->in_prime_field(f.coeff(0));
}

FqPoly trace_Tpn(const DrinfeldParams& P, const std::vector<DrinfeldClass>& classes, unsigned k,
                 std::int64_t l) {
  return CLTable(P, classes, k).trace(k, l);
}

FqPoly g_coeff(const DrinfeldParams& P, Elem b, std::int64_t r, unsigned m, unsigned k) {
  if (m == 0) throw Error("m must be positive");
  FqPoly t = (-P.wp).scale(b), pw = FqPoly::constant(P.Fq, 1), acc = FqPoly::zero(P.Fq);
  const std::int64_t M = m;
  for (unsigned j = 0; 2 * j <= k; ++j) {
    if (((static_cast<std::int64_t>(j) - r) % M + M) % M == 0)
      acc = acc + pw.scale(P.Fq->from_int(binom_mod_p(k - j, j, P.p())));
    pw = pw * t;
  }
  return acc;
}

Elem h_coeff(const FqField& Fq, Elem b, std::int64_t r, unsigned m, unsigned k) {
  if (m == 0) throw Error("m must be positive");
  Elem acc = 0;
  const std::int64_t M = m;
  for (unsigned j = 0; 2 * j <= k; ++j)
    if (((static_cast<std::int64_t>(j) - r) % M + M) % M == 0)
      acc = Fq.add(acc, Fq.mul(Fq.from_int(binom_mod_p(k - j, j, Fq.p())), Fq.pow(b, j)));
  return acc;
}

GSeriesCertificate g_series(const DrinfeldParams& P, Elem b, std::int64_t r, unsigned m,
                            bool statedSign) {
  GSeriesCertificate C;
  const FieldPtr& F = P.Fq;
  C.denominator.assign(2 * m + 1, FqPoly::zero(F));
  for (unsigned i = 0; i <= m; ++i) {
    Elem c = F->from_int(binom_mod_p(m, i, P.p()));
    if (i % 2) c = F->neg(c);
    C.denominator[i] = FqPoly::constant(F, c);
  }
  FqPoly t = P.wp.scale(b);
  if (!statedSign) t = -t;
  C.denominator[2 * m] = C.denominator[2 * m] - t.pow(m);
  const unsigned K = 6 * m + 2;
  std::vector<FqPoly> G;
  for (unsigned k = 0; k < K; ++k) G.push_back(g_coeff(P, b, r, m, k));
  std::vector<FqPoly> prod(K, FqPoly::zero(F));
  for (unsigned d = 0; d < K; ++d)
    for (unsigned i = 0; i <= d && i <= 2 * m; ++i) prod[d] = prod[d] + C.denominator[i] * G[d - i];
  C.rational = true;
  for (unsigned d = 2 * m - 1; d < K; ++d) C.rational &= prod[d].is_zero();
  prod.resize(2 * m - 1);
  while (!prod.empty() && prod.back().is_zero()) prod.pop_back();
  C.numerator = prod;
  return C;
}

unsigned ceil_log(u64 base, u64 s) {
  unsigned t = 0;
  for (u64 v = 1; v < s; v *= base) ++t;
  return t;
}

int residue_symbol(const FqPoly& a, const FqPoly& ell) {
  if (ell.field()->p() == 2) throw Error("residue symbol needs odd characteristic");
  u64 e = (norm(ell) - 1) / 2;
  FqPoly r = (a % ell).powmod(e, ell);
  if (r.is_zero()) return 0;
  if (r == FqPoly::constant(a.field(), 1)) return 1;
  if (r == FqPoly::constant(a.field(), a.field()->neg(1))) return -1;
  throw Error("Euler criterion gave a non-sign");
}

DPeriodSpec dperiod_for(const DrinfeldParams& P, const FqPoly& ell, unsigned s, DPeriodTable table) {
  if (s == 0) throw Error("s must be positive");
  if (!ell.is_monic() || !is_irreducible(ell)) throw Error("ell must be monic irreducible");
  DPeriodSpec S;
  S.ell = ell;
  S.s = s;
  S.table = table;
  const u64 p = P.p(), L = norm(ell);
  S.sTilde = ceil_log(p, s);
  const u64 ps = upow(p, S.sTilde);
  S.mEllS = (p == 2 && s == 1) ? L - 1 : ps * (L - 1) / 2;
  if (ell == P.P) {
    S.caseTag = DPeriodCase::EllIsP;
    S.period = ps * (L - 1);
    S.k0 = P.n == 1 ? 2 * s - 1 : s;
    return S;
  }
  S.k0 = s - 1;
  const bool symbolDeg = (ell.degree() % 2 == 1) == (table == DPeriodTable::Stated);
  if (p == 2 || !symbolDeg) {
    S.caseTag = DPeriodCase::TwoOrEvenDegree;
    S.period = p * ps * (L * L - 1);
    return S;
  }
  S.symbol = residue_symbol(P.wp, ell);
  if (S.symbol == -1) {
    S.caseTag = DPeriodCase::NonSquare;
    S.period = ps * (L * L - 1);
  } else {
    S.caseTag = DPeriodCase::Square;
    S.period = p * ps * (L * L - 1) / 2;
  }
  return S;
}

std::string case_name(DPeriodCase c) {
  switch (c) {
    case DPeriodCase::TwoOrEvenDegree: return "two-or-even-degree";
    case DPeriodCase::NonSquare: return "non-square";
    case DPeriodCase::Square: return "square";
    case DPeriodCase::EllIsP: return "ell-is-p";
  }
  return "?";
}

bool DPeriodReport::allPass() const {
  return std::all_of(checks.begin(), checks.end(), [](const DPeriodCheck& c) { return c.pass && c.splitOk; });
}

std::string poly_json(const FqPoly& f) { return nlohmann::json(f.coeff_arrays()).dump(); }

std::vector<std::string> DPeriodReport::json_lines(const DrinfeldParams& P) const {
  std::vector<std::string> out;
  for (auto& c : checks) {
    nlohmann::json j;
    j["q"] = P.q();
    j["P"] = P.P.str();
    j["n"] = P.n;
    j["ell"] = spec.ell.str();
    j["s"] = spec.s;
    j["l"] = l;
    j["k"] = c.k;
    j["period"] = spec.period;
    j["case"] = case_name(spec.caseTag);
    j["table"] = spec.table == DPeriodTable::Stated ? "stated" : "parity-swapped";
    j["trace"] = c.lhs.coeff_arrays();
    j["N"] = c.N.coeff_arrays();
    j["U"] = c.U.coeff_arrays();
    j["split"] = c.splitOk;
    j["pass"] = c.pass;
    out.push_back(j.dump());
  }
  return out;
}

DPeriodReport verify_period_ff(const DrinfeldParams& P, const std::vector<DrinfeldClass>& classes,
                               const FqPoly& ell, unsigned s, std::int64_t l, unsigned kLo,
                               unsigned kHi, DPeriodTable table) {
  DPeriodReport R;
  R.spec = dperiod_for(P, ell, s, table);
  R.l = l;
  if (kLo < R.spec.k0)
    throw Error("window starts at k=" + std::to_string(kLo) + " below k0=" + std::to_string(R.spec.k0));
  if (kHi < kLo) return R;
  const FieldPtr& F = P.Fq;
  const FqField& Fq = *F;
  const FqPoly M = ell.pow(s);
  auto red = [&](const FqPoly& f) { return f % M; };
  CLTable tab(P, classes, static_cast<unsigned>(kHi + R.spec.period), M);

  const unsigned mm = static_cast<unsigned>(R.spec.mEllS);
  // U classes grouped by b: sum of w a^e for e < 2m + 1
  std::map<Elem, std::vector<FqPoly>> Ub;
  std::vector<const DrinfeldClass*> Ncl;
  for (auto& c : classes) {
    if ((c.frobA % ell).is_zero()) {
      Ncl.push_back(&c);
      continue;
    }
    auto& v = Ub[c.frobB];
    if (v.empty()) v.assign(2 * mm + 1, FqPoly::zero(F));
    FqPoly a = red(c.frobA), ae = FqPoly::constant(F, fq_weight(Fq, c.autOrder));
    for (unsigned e = 0; e <= 2 * mm; ++e) {
      v[e] = v[e] + ae;
      ae = red(ae * a);
    }
  }
  std::vector<FqPoly> mwp{FqPoly::constant(F, 1)};
  for (unsigned j = 1; 2 * j <= kHi + 1; ++j) mwp.push_back(red(mwp.back() * -P.wp));

  for (unsigned k = kLo; k <= kHi; ++k) {
    DPeriodCheck c;
    c.k = k;
    c.lhs = tab.trace(k, l);
    c.rhs = tab.trace(static_cast<unsigned>(k + R.spec.period), l);
    c.pass = c.lhs == c.rhs;
    const unsigned dk = k % 2;
    const std::int64_t be = l - static_cast<std::int64_t>(k) - 1;
    c.N = FqPoly::zero(F);
    for (auto* cl : Ncl) {
      Elem w = fq_weight(Fq, cl->autOrder);
      for (unsigned j = 0; 2 * j + 1 + dk <= s; ++j) {
        unsigned e = (k - dk) / 2 - j;
        Elem coef = Fq.mul(Fq.from_int(binom_mod_p((k + dk) / 2 + j, 2 * j + dk, P.p())),
                           Fq.mul(Fq.pow(cl->frobB, static_cast<std::int64_t>(e) + be), w));
        c.N = c.N + red(mwp[e] * red(cl->frobA.pow(2 * j + dk))).scale(coef);
      }
    }
    c.N = red(c.N);
    c.U = FqPoly::zero(F);
    for (auto& [b, S] : Ub) {
      std::vector<FqPoly> g(mm, FqPoly::zero(F));
      for (unsigned j = 0; 2 * j <= k; ++j) {
        std::uint32_t bin = binom_mod_p(k - j, j, P.p());
        if (bin) g[j % mm] = g[j % mm] + mwp[j].scale(Fq.mul(Fq.from_int(bin), Fq.pow(b, j)));
      }
      FqPoly acc = FqPoly::zero(F);
      for (unsigned r = 0; r < mm; ++r) {
        unsigned idx = static_cast<unsigned>(((static_cast<std::int64_t>(k / 2) - r) % mm + mm) % mm);
        acc = acc + red(red(g[idx]) * S[2 * r + dk]);
      }
      c.U = c.U + acc.scale(Fq.pow(b, be));
    }
    c.U = red(c.U);
    c.splitOk = red(c.lhs + c.N + c.U).is_zero();
    R.checks.push_back(std::move(c));
  }
  return R;
}

TrInfty tr_infty(const DrinfeldParams& P, const CLTable& tab, unsigned k, std::int64_t l) {
  TrInfty T;
  T.trace = tab.trace(k, l);
  T.bound = ((k + 1) / 2) * static_cast<unsigned>(P.wp.degree());
  if (T.trace.is_zero()) return T;
  if (T.trace.degree() > static_cast<int>(T.bound))
    throw Error("trace degree " + std::to_string(T.trace.degree()) + " exceeds Riemann bound " +
                std::to_string(T.bound) + " at k=" + std::to_string(k));
  T.valuation = T.bound - static_cast<unsigned>(T.trace.degree());
  return T;
}

bool RamanujanReport::allPass() const {
  return std::all_of(rows.begin(), rows.end(), [](const RamanujanRow& r) { return r.pass; });
}

std::vector<std::string> RamanujanReport::json_lines(const DrinfeldParams& P) const {
  std::vector<std::string> out;
  if (vacuous) {
    nlohmann::json j{{"q", P.q()}, {"P", P.P.str()}, {"n", P.n}, {"vacuous", true}};
    out.push_back(j.dump());
    return out;
  }
  for (auto& r : rows) {
    nlohmann::json j{{"q", P.q()}, {"P", P.P.str()}, {"n", P.n}, {"k", r.k},
                     {"l", r.l}, {"degTr", r.degTr}, {"bound", r.bound}, {"pass", r.pass}};
    out.push_back(j.dump());
  }
  return out;
}

RamanujanReport ramanujan_check(const DrinfeldParams& P, const std::vector<DrinfeldClass>& classes) {
  RamanujanReport R;
  const u64 q = P.q(), twice = u64(P.n) * P.P.degree() * (q - 1);
  if (twice % 2) {
    R.vacuous = true;
    return R;
  }
  R.s = static_cast<unsigned>(twice / 2);
  R.sTilde = ceil_log(P.p(), R.s);
  R.kEnd = static_cast<unsigned>(upow(P.p(), 1 + R.sTilde) * (q * q - 1) + R.s);
  CLTable tab(P, classes, R.kEnd - 1);
  for (unsigned l = 1; l < q; ++l)
    for (unsigned k = 0; k < R.kEnd; ++k) {
      TrInfty T = tr_infty(P, tab, k, l);
      RamanujanRow row;
      row.k = k;
      row.l = l;
      row.degTr = T.trace.degree();
      row.bound = static_cast<int>(T.bound) - static_cast<int>(R.s);
      row.pass = !T.valuation || *T.valuation >= R.s;
      R.rows.push_back(row);
    }
  return R;
}

ExponentResult exponent_check(const FqPoly& ell, unsigned s, u64 maxSize) {
  if (s == 0) throw Error("s must be positive");
  if (!ell.is_monic() || !is_irreducible(ell)) throw Error("ell must be monic irreducible");
  const FieldPtr& F = ell.field();
  const unsigned d = static_cast<unsigned>(ell.degree()) * s;
  const u64 size = upow(F->size(), d);
  if (size > maxSize)
    throw BudgetError("A/ell^s has " + std::to_string(size) + " elements, above the cap " +
                      std::to_string(maxSize) + " (raise with --max-field-size)");
  const FqPoly M = ell.pow(s), one = FqPoly::constant(F, 1);
  const u64 Lsz = norm(ell);
  const u64 order = upow(Lsz, s - 1) * (Lsz - 1);
  const auto primes = prime_factors(order);
  ExponentResult R;
  R.brute = 1;
  for (auto& x : residues(F, d)) {
    if ((x % ell).is_zero()) continue;
    u64 e = order;
    for (u64 r : primes)
      while (e % r == 0 && x.powmod(e / r, M) == one) e /= r;
    R.brute = std::lcm(R.brute, e);
  }
  R.formula = upow(F->p(), ceil_log(F->p(), s)) * (Lsz - 1);
  return R;
}

}  // namespace modtrace
