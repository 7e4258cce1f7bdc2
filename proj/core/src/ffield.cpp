#include "modtrace/ffield.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

namespace modtrace {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod64(u64 a, u64 b, u64 m) { return static_cast<u64>(u128(a) * b % m); }

u64 powmod64(u64 b, u64 e, u64 m) {
  u64 r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod64(r, b, m);
    b = mulmod64(b, b, m);
    e >>= 1;
  }
  return r;
}

void fp_trim(FpPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

std::uint32_t fp_inv(std::uint32_t a, std::uint32_t p) {
  return static_cast<std::uint32_t>(powmod64(a, p - 2, p));
}

FpPoly fp_mod(FpPoly a, const FpPoly& f, std::uint32_t p) {
  fp_trim(a);
  int df = static_cast<int>(f.size()) - 1;
  std::uint32_t li = fp_inv(f.back(), p);
  while (static_cast<int>(a.size()) - 1 >= df) {
    std::uint32_t c = static_cast<std::uint32_t>(u64(a.back()) * li % p);
    std::size_t sh = a.size() - f.size();
    for (std::size_t i = 0; i < f.size(); ++i)
      a[sh + i] = static_cast<std::uint32_t>((a[sh + i] + u64(p - c) * f[i]) % p);
    fp_trim(a);
  }
  return a;
}

FpPoly fp_mulmod(const FpPoly& a, const FpPoly& b, const FpPoly& f, std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  FpPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      r[i + j] = static_cast<std::uint32_t>((r[i + j] + u64(a[i]) * b[j]) % p);
  }
  return fp_mod(std::move(r), f, p);
}

FpPoly fp_gcd(FpPoly a, FpPoly b, std::uint32_t p) {
  fp_trim(a);
  fp_trim(b);
  while (!b.empty()) {
    FpPoly r = fp_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

FpPoly fp_powmod(FpPoly b, u64 e, const FpPoly& f, std::uint32_t p) {
  FpPoly r{1};
  b = fp_mod(std::move(b), f, p);
  while (e) {
    if (e & 1) r = fp_mulmod(r, b, f, p);
    e >>= 1;
    if (e) b = fp_mulmod(b, b, f, p);
  }
  return r;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (u64 sp : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % sp == 0) return n == sp;
  }
  u64 d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    u64 x = powmod64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool comp = true;
    for (int i = 1; i < r; ++i) {
      x = mulmod64(x, x, n);
      if (x == n - 1) {
        comp = false;
        break;
      }
    }
    if (comp) return false;
  }
  return true;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<u64> out;
  for (u64 d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

PrimePower make_prime_power(std::uint64_t p, unsigned a) {
  if (!is_prime(p)) throw Error("not a prime: " + std::to_string(p));
  if (a == 0) throw Error("field degree must be positive");
  u64 q = 1;
  for (unsigned i = 0; i < a; ++i) {
    if (q > (u64(1) << 40) / p) throw BudgetError("prime power p^a too large");
    q *= p;
  }
  return {static_cast<std::uint32_t>(p), a, q};
}

std::optional<PrimePower> as_prime_power(std::uint64_t q) {
  if (q < 2) return std::nullopt;
  auto fs = prime_factors(q);
  if (fs.size() != 1) return std::nullopt;
  unsigned a = 0;
  u64 t = q;
  while (t > 1) {
    t /= fs[0];
    ++a;
  }
  return PrimePower{static_cast<std::uint32_t>(fs[0]), a, q};
}

bool fp_is_irreducible(const FpPoly& f0, std::uint32_t p) {
  FpPoly f = f0;
  fp_trim(f);
  if (f.size() < 2) return false;
  std::size_t d = f.size() - 1;
  if (d == 1) return true;
  std::uint32_t li = fp_inv(f.back(), p);
  for (auto& c : f) c = static_cast<std::uint32_t>(u64(c) * li % p);
  FpPoly h{0, 1};
  for (std::size_t i = 1; i <= d / 2; ++i) {
    h = fp_powmod(h, p, f, p);
    FpPoly t = h;
    t.resize(std::max<std::size_t>(t.size(), 2), 0);
    t[1] = (t[1] + p - 1) % p;
    fp_trim(t);
    if (t.empty()) return false;
    if (fp_gcd(f, t, p).size() > 1) return false;
  }
  return true;
}

FpPoly lex_least_irreducible(std::uint32_t p, unsigned a) {
  u64 total = 1;
  for (unsigned i = 0; i < a; ++i) total *= p;
  for (u64 c = 0; c < total; ++c) {
    FpPoly f(a + 1, 0);
    u64 t = c;
    for (unsigned i = 0; i < a; ++i) {
      f[i] = static_cast<std::uint32_t>(t % p);
      t /= p;
    }
    f[a] = 1;
    if (fp_is_irreducible(f, p)) return f;
  }
  throw Error("no irreducible polynomial found");
}

FqField::Elem FqField::from_coeffs(const FpPoly& c) const {
  Elem e = 0;
  u64 pw = 1;
  for (unsigned i = 0; i < base_.a; ++i) {
    std::uint32_t ci = i < c.size() ? c[i] % base_.p : 0;
    e += static_cast<Elem>(ci * pw);
    pw *= base_.p;
  }
  return e;
}

FpPoly FqField::coeffs(Elem e) const {
  FpPoly c(base_.a, 0);
  for (unsigned i = 0; i < base_.a; ++i) {
    c[i] = e % base_.p;
    e /= base_.p;
  }
  return c;
}

FqField::Elem FqField::mul_poly(Elem x, Elem y) const {
  return from_coeffs(fp_mulmod(coeffs(x), coeffs(y), modulus_, base_.p));
}

FieldPtr FqField::make(std::uint32_t p, unsigned a, std::uint64_t maxSize) {
  PrimePower pp = make_prime_power(p, a);
  if (pp.q > maxSize)
    throw BudgetError("field F_" + std::to_string(p) + "^" + std::to_string(a) + " has " +
                      std::to_string(pp.q) + " elements, above the cap " +
                      std::to_string(maxSize) + " (raise with --max-field-size)");
  if (pp.q > (u64(1) << 31)) throw BudgetError("field too large for 32-bit element indices");
  auto F = std::shared_ptr<FqField>(new FqField());
  F->base_ = pp;
  F->modulus_ = lex_least_irreducible(p, a);
  const u64 q = pp.q;

  // chunked digit-wise addition tables
  F->chunkDigits_ = 1;
  F->chunk_ = p;
  while (F->chunkDigits_ < a && u64(F->chunk_) * p <= 1024) {
    F->chunk_ *= p;
    ++F->chunkDigits_;
  }
  if (p != 2) {
    const std::uint32_t P = F->chunk_;
    F->chunkAdd_.assign(u64(P) * P, 0);
    F->chunkNeg_.assign(P, 0);
    for (std::uint32_t x = 0; x < P; ++x) {
      std::uint32_t nx = 0, pw = 1, t = x;
      for (unsigned i = 0; i < F->chunkDigits_; ++i) {
        nx += ((p - t % p) % p) * pw;
        t /= p;
        pw *= p;
      }
      F->chunkNeg_[x] = nx;
      for (std::uint32_t y = 0; y < P; ++y) {
        std::uint32_t s = 0, tx = x, ty = y;
        pw = 1;
        for (unsigned i = 0; i < F->chunkDigits_; ++i) {
          s += ((tx % p + ty % p) % p) * pw;
          tx /= p;
          ty /= p;
          pw *= p;
        }
        F->chunkAdd_[u64(x) * P + y] = s;
      }
    }
  }

  // primitive element: least index whose order is q-1
  auto fs = prime_factors(q - 1);
  auto slow_pow = [&](Elem b, u64 e) {
    Elem r = 1;
    while (e) {
      if (e & 1) r = F->mul_poly(r, b);
      e >>= 1;
      if (e) b = F->mul_poly(b, b);
    }
    return r;
  };
  Elem g = 1;
  if (q > 2) {
    for (g = 1; g < q; ++g) {
      bool ok = true;
      for (u64 r : fs) {
        if (slow_pow(g, (q - 1) / r) == 1) {
          ok = false;
          break;
        }
      }
      if (ok) break;
    }
  }
  F->exp_.assign(2 * (q - 1), 0);
  F->log_.assign(q, 0);
  Elem e = 1;
  for (u64 i = 0; i < q - 1; ++i) {
    F->exp_[i] = e;
    F->exp_[i + q - 1] = e;
    F->log_[e] = static_cast<std::uint32_t>(i);
    e = F->mul_poly(e, g);
  }
  if (e != 1) throw Error("internal: primitive element search failed");

  if (p == 2) {
    F->as_.assign(q, -1);
    for (u64 z = 0; z < q; ++z) {
      Elem w = F->mul(static_cast<Elem>(z), static_cast<Elem>(z)) ^ static_cast<Elem>(z);
      if (F->as_[w] < 0) F->as_[w] = static_cast<std::int64_t>(z);
    }
  }
  return F;
}

FieldPtr field(std::uint32_t p, unsigned a, std::uint64_t maxSize) {
  static std::mutex mu;
  static std::map<std::pair<std::uint32_t, unsigned>, FieldPtr> cache;
  {
    std::lock_guard<std::mutex> lk(mu);
    auto it = cache.find({p, a});
    if (it != cache.end()) {
      if (it->second->size() > maxSize)
        throw BudgetError("field of size " + std::to_string(it->second->size()) +
                          " above the cap " + std::to_string(maxSize) +
                          " (raise with --max-field-size)");
      return it->second;
    }
  }
  FieldPtr F = FqField::make(p, a, maxSize);
  std::lock_guard<std::mutex> lk(mu);
  return cache.emplace(std::make_pair(p, a), F).first->second;
}

FqField::Elem FqField::gen() const {
  if (base_.a == 1) return (base_.p - modulus_[0]) % base_.p;
  return base_.p;
}

FqField::Elem FqField::from_int(std::int64_t v) const {
  std::int64_t r = v % static_cast<std::int64_t>(base_.p);
  if (r < 0) r += base_.p;
  return static_cast<Elem>(r);
}

FqField::Elem FqField::from_mpz(const mpz_class& v) const {
  mpz_class r = v % base_.p;
  if (r < 0) r += base_.p;
  return static_cast<Elem>(r.get_ui());
}

std::uint32_t FqField::to_prime(Elem e) const {
  if (e >= base_.p) throw Error("element is not in the prime field");
  return e;
}

FqField::Elem FqField::add_slow(Elem x, Elem y) const {
  const std::uint32_t P = chunk_;
  if (base_.a <= chunkDigits_) return chunkAdd_[u64(x) * P + y];
  Elem r = 0, pw = 1;
  while (x | y) {
    r += chunkAdd_[u64(x % P) * P + y % P] * pw;
    x /= P;
    y /= P;
    pw *= P;
  }
  return r;
}

FqField::Elem FqField::neg(Elem x) const {
  if (base_.p == 2) return x;
  const std::uint32_t P = chunk_;
  Elem r = 0, pw = 1;
  while (x) {
    r += chunkNeg_[x % P] * pw;
    x /= P;
    pw *= P;
  }
  return r;
}

FqField::Elem FqField::inv(Elem x) const {
  if (x == 0) throw Error("division by zero in finite field");
  std::uint32_t l = log_[x];
  return exp_[l == 0 ? 0 : (base_.q - 1 - l)];
}

FqField::Elem FqField::pow(Elem x, std::int64_t e) const {
  if (x == 0) {
    if (e == 0) return 1;
    if (e < 0) throw Error("division by zero in finite field");
    return 0;
  }
  const std::int64_t n = static_cast<std::int64_t>(base_.q - 1);
  std::int64_t r = e % n;
  if (r < 0) r += n;
  u64 t = static_cast<u64>((static_cast<__int128>(log_[x]) * r) % n);
  return exp_[t];
}

std::uint32_t FqField::log(Elem x) const {
  if (x == 0) throw Error("log of zero");
  return log_[x];
}

int FqField::chi(Elem x) const {
  if (base_.p == 2) throw Error("quadratic character needs odd characteristic");
  if (x == 0) return 0;
  return (log_[x] & 1) ? -1 : 1;
}

bool FqField::is_square(Elem x) const {
  if (x == 0 || base_.p == 2) return true;
  return (log_[x] & 1) == 0;
}

std::optional<FqField::Elem> FqField::sqrt(Elem x) const {
  if (x == 0) return Elem(0);
  std::uint32_t l = log_[x];
  if (base_.p == 2) {
    if (l & 1) l += static_cast<std::uint32_t>(base_.q - 1);
    return exp_[(l / 2) % (base_.q - 1)];
  }
  if (l & 1) return std::nullopt;
  return exp_[l / 2];
}

std::uint32_t FqField::abs_trace(Elem x) const {
  Elem s = 0, y = x;
  for (unsigned i = 0; i < base_.a; ++i) {
    s = add(s, y);
    y = frob(y);
  }
  return to_prime(s);
}

std::optional<FqField::Elem> FqField::artin_schreier(Elem w) const {
  if (base_.p != 2) throw Error("Artin-Schreier solve needs characteristic 2");
  if (as_[w] < 0) return std::nullopt;
  return static_cast<Elem>(as_[w]);
}

std::string FqField::describe() const {
  std::ostringstream os;
  os << "F_" << base_.p;
  if (base_.a > 1) os << "^" << base_.a;
  os << " mod [";
  for (std::size_t i = 0; i < modulus_.size(); ++i) os << (i ? "," : "") << modulus_[i];
  os << "]";
  return os.str();
}

FqField::Elem generator_image(const FqField& src, const FqField& dst) {
  if (src.p() != dst.p() || dst.degree() % src.degree() != 0)
    throw Error("incompatible fields for embedding");
  static std::mutex mu;
  static std::map<std::tuple<std::uint32_t, unsigned, unsigned>, FqField::Elem> cache;
  auto key = std::make_tuple(src.p(), src.degree(), dst.degree());
  {
    std::lock_guard<std::mutex> lk(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  const FpPoly& f = src.modulus();
  for (u64 z = 0; z < dst.size(); ++z) {
    FqField::Elem acc = 0;
    for (std::size_t i = f.size(); i-- > 0;)
      acc = dst.add(dst.mul(acc, static_cast<FqField::Elem>(z)), dst.from_int(f[i]));
    if (acc == 0) {
      std::lock_guard<std::mutex> lk(mu);
      cache[key] = static_cast<FqField::Elem>(z);
      return static_cast<FqField::Elem>(z);
    }
  }
  throw Error("internal: no root of the source modulus in the target field");
}

FqField::Elem embed(const FqField& src, FqField::Elem e, const FqField& dst) {
  if (&src == &dst) return e;
  if (src.degree() == 1) {
    if (src.p() != dst.p()) throw Error("incompatible fields for embedding");
    return dst.from_int(e);
  }
  FqField::Elem g = generator_image(src, dst);
  FpPoly c = src.coeffs(e);
  FqField::Elem acc = 0;
  for (std::size_t i = c.size(); i-- > 0;) acc = dst.add(dst.mul(acc, g), dst.from_int(c[i]));
  return acc;
}

namespace {
mpz_class reduce(const mpz_class& v, const mpz_class& m) {
  mpz_class r = v % m;
  if (r < 0) r += m;
  return r;
}
}  // namespace

ResidueInt::ResidueInt(mpz_class modulus, mpz_class value) : m_(std::move(modulus)) {
  if (m_ <= 0) throw Error("residue modulus must be positive");
  v_ = reduce(value, m_);
}

void ResidueInt::check(const ResidueInt& o) const {
  if (m_ != o.m_) throw Error("mixed-modulus residue arithmetic");
}

bool ResidueInt::is_unit() const {
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), v_.get_mpz_t(), m_.get_mpz_t());
  return g == 1;
}

ResidueInt ResidueInt::inverse() const {
  mpz_class r;
  if (!mpz_invert(r.get_mpz_t(), v_.get_mpz_t(), m_.get_mpz_t())) {
    if (m_ == 1) return *this;
    throw Error("residue is not a unit");
  }
  return ResidueInt(m_, r);
}

ResidueInt ResidueInt::operator+(const ResidueInt& o) const {
  check(o);
  return ResidueInt(m_, v_ + o.v_);
}
ResidueInt ResidueInt::operator-(const ResidueInt& o) const {
  check(o);
  return ResidueInt(m_, v_ - o.v_);
}
ResidueInt ResidueInt::operator*(const ResidueInt& o) const {
  check(o);
  return ResidueInt(m_, v_ * o.v_);
}
ResidueInt ResidueInt::operator-() const { return ResidueInt(m_, -v_); }
bool ResidueInt::operator==(const ResidueInt& o) const { return m_ == o.m_ && v_ == o.v_; }

ResiduePoly::ResiduePoly(mpz_class modulus, std::vector<mpz_class> coeffs)
    : m_(std::move(modulus)), c_(std::move(coeffs)) {
  if (m_ <= 0) throw Error("residue modulus must be positive");
  for (auto& c : c_) c = reduce(c, m_);
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

void ResiduePoly::check(const ResiduePoly& o) const {
  if (m_ != o.m_) throw Error("mixed-modulus polynomial arithmetic");
}

ResiduePoly ResiduePoly::operator+(const ResiduePoly& o) const {
  check(o);
  std::vector<mpz_class> r(std::max(c_.size(), o.c_.size()));
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = coeff(i) + o.coeff(i);
  return ResiduePoly(m_, std::move(r));
}

ResiduePoly ResiduePoly::operator-(const ResiduePoly& o) const {
  check(o);
  std::vector<mpz_class> r(std::max(c_.size(), o.c_.size()));
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = coeff(i) - o.coeff(i);
  return ResiduePoly(m_, std::move(r));
}

ResiduePoly ResiduePoly::operator*(const ResiduePoly& o) const {
  check(o);
  if (c_.empty() || o.c_.empty()) return ResiduePoly(m_, {});
  std::vector<mpz_class> r(c_.size() + o.c_.size() - 1);
  for (std::size_t i = 0; i < c_.size(); ++i)
    for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
  return ResiduePoly(m_, std::move(r));
}

std::string ResiduePoly::str() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < c_.size(); ++i) os << (i ? "," : "") << c_[i].get_str();
  os << "] mod " << m_.get_str();
  return os.str();
}

DivisionResult poly_divides_mod(const ResiduePoly& d, const ResiduePoly& f) {
  if (d.modulus() != f.modulus()) throw Error("mixed-modulus polynomial division");
  const mpz_class& m = d.modulus();
  if (d.is_zero()) throw Error("division by the zero polynomial");
  ResidueInt lc(m, d.coeffs().back());
  if (!lc.is_unit())
    throw Error("leading coefficient " + lc.value().get_str() + " of the divisor is not a unit mod " +
                m.get_str() + "; normalize the divisor first");
  mpz_class li = lc.inverse().value();
  std::vector<mpz_class> rem = f.coeffs();
  const std::size_t dd = d.coeffs().size() - 1;
  std::vector<mpz_class> quo(rem.size() >= dd + 1 ? rem.size() - dd : 0);
  for (std::size_t i = rem.size(); i-- > dd;) {
    mpz_class c = reduce(rem[i] * li, m);
    if (c == 0) continue;
    quo[i - dd] = c;
    for (std::size_t j = 0; j <= dd; ++j) rem[i - dd + j] = reduce(rem[i - dd + j] - c * d.coeffs()[j], m);
  }
  DivisionResult out;
  out.remainder = ResiduePoly(m, rem);
  out.divides = out.remainder->is_zero();
  if (out.divides) out.quotient = ResiduePoly(m, quo);
  return out;
}

ResiduePoly xn_minus_one(const mpz_class& m, std::uint64_t n) {
  std::vector<mpz_class> c(n + 1);
  c[0] = -1;
  c[n] += 1;
  return ResiduePoly(m, std::move(c));
}

}  // namespace modtrace
