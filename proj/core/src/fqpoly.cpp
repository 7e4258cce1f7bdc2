#include "modtrace/fqpoly.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace modtrace {

FqPoly::FqPoly(FieldPtr F, std::vector<Elem> c) : F_(std::move(F)), c_(std::move(c)) {
  if (!F_) throw Error("polynomial without a coefficient field");
  trim();
}

void FqPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

void FqPoly::need(const FqPoly& o) const {
  if (F_.get() != o.F_.get()) throw Error("polynomials over different fields");
}

FqPoly FqPoly::monomial(FieldPtr F, Elem c, unsigned deg) {
  std::vector<Elem> v(deg + 1, 0);
  v[deg] = c;
  return FqPoly(std::move(F), std::move(v));
}

FqPoly FqPoly::parse(FieldPtr F, const std::string& s0) {
  std::string s;
  for (char ch : s0)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) throw Error("empty polynomial string");
  FqPoly acc = zero(F);
  std::size_t i = 0;
  while (i < s.size()) {
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      if (s[i] == '-') sign = -1;
      ++i;
    }
    long long coef = 1;
    bool haveCoef = false;
    std::size_t j = i;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) {
      coef = std::stoll(s.substr(i, j - i));
      haveCoef = true;
      i = j;
      if (i < s.size() && s[i] == '*') ++i;
    }
    unsigned e = 0;
    if (i < s.size() && (s[i] == 'T' || s[i] == 't')) {
      ++i;
      e = 1;
      if (i < s.size() && s[i] == '^') {
        ++i;
        std::size_t k = i;
        while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
        if (k == i) throw Error("bad exponent in polynomial: " + s0);
        e = static_cast<unsigned>(std::stoul(s.substr(i, k - i)));
        i = k;
      }
    } else if (!haveCoef) {
      throw Error("cannot parse polynomial: " + s0);
    }
    acc = acc + monomial(F, F->from_int(sign * coef), e);
    if (i < s.size() && s[i] != '+' && s[i] != '-') throw Error("cannot parse polynomial: " + s0);
  }
  return acc;
}

FqPoly FqPoly::operator+(const FqPoly& o) const {
  need(o);
  std::vector<Elem> r(std::max(c_.size(), o.c_.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = F_->add(coeff(i), o.coeff(i));
  return FqPoly(F_, std::move(r));
}

FqPoly FqPoly::operator-(const FqPoly& o) const {
  need(o);
  std::vector<Elem> r(std::max(c_.size(), o.c_.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = F_->sub(coeff(i), o.coeff(i));
  return FqPoly(F_, std::move(r));
}

FqPoly FqPoly::operator-() const {
  std::vector<Elem> r(c_.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = F_->neg(c_[i]);
  return FqPoly(F_, std::move(r));
}

FqPoly FqPoly::operator*(const FqPoly& o) const {
  need(o);
  if (c_.empty() || o.c_.empty()) return zero(F_);
  std::vector<Elem> r(c_.size() + o.c_.size() - 1, 0);
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (!c_[i]) continue;
    for (std::size_t j = 0; j < o.c_.size(); ++j)
      if (o.c_[j]) r[i + j] = F_->add(r[i + j], F_->mul(c_[i], o.c_[j]));
  }
  return FqPoly(F_, std::move(r));
}

FqPoly FqPoly::scale(Elem c) const {
  std::vector<Elem> r(c_.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = F_->mul(c, c_[i]);
  return FqPoly(F_, std::move(r));
}

std::pair<FqPoly, FqPoly> FqPoly::divmod(const FqPoly& d) const {
  need(d);
  if (d.is_zero()) throw Error("polynomial division by zero");
  std::vector<Elem> rem = c_;
  const std::size_t dd = d.c_.size() - 1;
  if (rem.size() <= dd) return {zero(F_), *this};
  std::vector<Elem> quo(rem.size() - dd, 0);
  Elem li = F_->inv(d.lc());
  for (std::size_t i = rem.size(); i-- > dd;) {
    if (!rem[i]) continue;
    Elem c = F_->mul(rem[i], li);
    quo[i - dd] = c;
    for (std::size_t j = 0; j <= dd; ++j)
      rem[i - dd + j] = F_->sub(rem[i - dd + j], F_->mul(c, d.c_[j]));
  }
  return {FqPoly(F_, std::move(quo)), FqPoly(F_, std::move(rem))};
}

FqPoly FqPoly::pow(std::uint64_t e) const {
  FqPoly r = constant(F_, 1), b = *this;
  while (e) {
    if (e & 1) r = r * b;
    e >>= 1;
    if (e) b = b * b;
  }
  return r;
}

FqPoly FqPoly::powmod(std::uint64_t e, const FqPoly& m) const {
  FqPoly r = constant(F_, 1) % m, b = *this % m;
  while (e) {
    if (e & 1) r = (r * b) % m;
    e >>= 1;
    if (e) b = (b * b) % m;
  }
  return r;
}

FqPoly FqPoly::monic() const {
  if (is_zero()) return *this;
  return scale(F_->inv(lc()));
}

FqPoly::Elem FqPoly::eval(Elem x) const {
  Elem acc = 0;
  for (std::size_t i = c_.size(); i-- > 0;) acc = F_->add(F_->mul(acc, x), c_[i]);
  return acc;
}

FqPoly::Elem FqPoly::eval_in(const FqField& L, Elem x) const {
  Elem acc = 0;
  for (std::size_t i = c_.size(); i-- > 0;) acc = L.add(L.mul(acc, x), embed(*F_, c_[i], L));
  return acc;
}

bool FqPoly::operator<(const FqPoly& o) const {
  if (c_.size() != o.c_.size()) return c_.size() < o.c_.size();
  for (std::size_t i = c_.size(); i-- > 0;)
    if (c_[i] != o.c_[i]) return c_[i] < o.c_[i];
  return false;
}

std::string FqPoly::str() const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = c_.size(); i-- > 0;) {
    if (!c_[i]) continue;
    if (!first) os << "+";
    first = false;
    bool unit = c_[i] == 1;
    std::string cs;
    if (F_->degree() == 1) {
      cs = std::to_string(c_[i]);
    } else {
      cs = "(";
      auto v = F_->coeffs(c_[i]);
      for (std::size_t k = 0; k < v.size(); ++k) cs += (k ? "," : "") + std::to_string(v[k]);
      cs += ")";
    }
    if (i == 0) {
      os << cs;
    } else {
      if (!unit) os << cs << "*";
      os << "T";
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

std::vector<std::vector<std::uint32_t>> FqPoly::coeff_arrays() const {
  std::vector<std::vector<std::uint32_t>> out;
  for (Elem e : c_) out.push_back(F_->coeffs(e));
  return out;
}

FqPoly gcd(FqPoly a, FqPoly b) {
  while (!b.is_zero()) {
    FqPoly r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

bool is_irreducible(const FqPoly& f) {
  if (f.degree() < 1) return false;
  if (f.degree() == 1) return true;
  const auto& F = f.field();
  FqPoly g = f.monic();
  FqPoly x = FqPoly::T(F);
  FqPoly h = x;
  for (int i = 1; i <= g.degree() / 2; ++i) {
    h = h.powmod(F->size(), g);
    FqPoly t = h - x;
    if (t.is_zero()) return false;
    if (gcd(g, t).degree() > 0) return false;
  }
  return true;
}

std::vector<FqPoly> monic_irreducibles(const FieldPtr& F, unsigned deg) {
  std::vector<FqPoly> out;
  std::uint64_t total = 1;
  for (unsigned i = 0; i < deg; ++i) total *= F->size();
  for (std::uint64_t c = 0; c < total; ++c) {
    std::vector<FqField::Elem> v(deg + 1, 0);
    std::uint64_t t = c;
    for (unsigned i = 0; i < deg; ++i) {
      v[i] = static_cast<FqField::Elem>(t % F->size());
      t /= F->size();
    }
    v[deg] = 1;
    FqPoly f(F, v);
    if (is_irreducible(f)) out.push_back(f);
  }
  return out;
}

std::uint64_t norm(const FqPoly& f) {
  std::uint64_t r = 1;
  for (int i = 0; i < f.degree(); ++i) r *= f.field()->size();
  return r;
}

}  // namespace modtrace
