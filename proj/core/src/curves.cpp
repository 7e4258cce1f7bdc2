#include "modtrace/curves.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

namespace modtrace {

namespace {

struct Ops {
  const FqField& F;
  Elem add(Elem x, Elem y) const { return F.add(x, y); }
  Elem sub(Elem x, Elem y) const { return F.sub(x, y); }
  Elem mul(Elem x, Elem y) const { return F.mul(x, y); }
  Elem k(std::int64_t c) const { return F.from_int(c); }
};

int mod(long long v, int N) {
  long long r = v % N;
  return static_cast<int>(r < 0 ? r + N : r);
}

}  // namespace

std::string WeierstrassCurve::str() const {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < 5; ++i) os << (i ? "," : "") << a[i];
  os << "] over " << F->describe();
  return os.str();
}

CurveInvariants invariants(const WeierstrassCurve& E) {
  const FqField& F = *E.F;
  Ops o{F};
  auto [a1, a2, a3, a4, a6] = E.a;
  CurveInvariants v{};
  v.b2 = o.add(o.mul(a1, a1), o.mul(o.k(4), a2));
  v.b4 = o.add(o.mul(o.k(2), a4), o.mul(a1, a3));
  v.b6 = o.add(o.mul(a3, a3), o.mul(o.k(4), a6));
  Elem t = o.mul(o.mul(a1, a1), a6);
  t = o.add(t, o.mul(o.k(4), o.mul(a2, a6)));
  t = o.sub(t, o.mul(a1, o.mul(a3, a4)));
  t = o.add(t, o.mul(a2, o.mul(a3, a3)));
  v.b8 = o.sub(t, o.mul(a4, a4));
  v.c4 = o.sub(o.mul(v.b2, v.b2), o.mul(o.k(24), v.b4));
  v.c6 = o.add(o.sub(o.mul(o.k(36), o.mul(v.b2, v.b4)), o.mul(v.b2, o.mul(v.b2, v.b2))),
               o.mul(o.k(-216), v.b6));
  Elem d = F.neg(o.mul(o.mul(v.b2, v.b2), v.b8));
  d = o.sub(d, o.mul(o.k(8), o.mul(v.b4, o.mul(v.b4, v.b4))));
  d = o.sub(d, o.mul(o.k(27), o.mul(v.b6, v.b6)));
  d = o.add(d, o.mul(o.k(9), o.mul(v.b2, o.mul(v.b4, v.b6))));
  v.disc = d;
  return v;
}

bool is_smooth(const WeierstrassCurve& E) { return invariants(E).disc != 0; }

Elem j_invariant(const WeierstrassCurve& E) {
  auto v = invariants(E);
  if (v.disc == 0) throw Error("singular curve: discriminant is zero");
  const FqField& F = *E.F;
  return F.div(F.mul(v.c4, F.mul(v.c4, v.c4)), v.disc);
}

WeierstrassCurve base_change(const WeierstrassCurve& E, const FieldPtr& L) {
  WeierstrassCurve out{L, {}};
  for (int i = 0; i < 5; ++i) out.a[i] = embed(*E.F, E.a[i], *L);
  return out;
}

WeierstrassCurve transform(const WeierstrassCurve& E, const CoordChange& c) {
  const FqField& F = *E.F;
  Ops o{F};
  auto [a1, a2, a3, a4, a6] = E.a;
  const Elem u = c.u, r = c.r, s = c.s, t = c.t;
  Elem ui = F.inv(u);
  Elem ui2 = o.mul(ui, ui), ui3 = o.mul(ui2, ui), ui4 = o.mul(ui2, ui2), ui6 = o.mul(ui3, ui3);
  WeierstrassCurve out{E.F, {}};
  out.a[0] = o.mul(o.add(a1, o.mul(o.k(2), s)), ui);
  out.a[1] = o.mul(o.sub(o.add(o.sub(a2, o.mul(s, a1)), o.mul(o.k(3), r)), o.mul(s, s)), ui2);
  out.a[2] = o.mul(o.add(o.add(a3, o.mul(r, a1)), o.mul(o.k(2), t)), ui3);
  Elem x = o.sub(a4, o.mul(s, a3));
  x = o.add(x, o.mul(o.k(2), o.mul(r, a2)));
  x = o.sub(x, o.mul(o.add(t, o.mul(r, s)), a1));
  x = o.add(x, o.mul(o.k(3), o.mul(r, r)));
  x = o.sub(x, o.mul(o.k(2), o.mul(s, t)));
  out.a[3] = o.mul(x, ui4);
  Elem y = o.add(a6, o.mul(r, a4));
  y = o.add(y, o.mul(o.mul(r, r), a2));
  y = o.add(y, o.mul(r, o.mul(r, r)));
  y = o.sub(y, o.mul(t, a3));
  y = o.sub(y, o.mul(t, t));
  y = o.sub(y, o.mul(r, o.mul(t, a1)));
  out.a[4] = o.mul(y, ui6);
  return out;
}

namespace {

std::uint64_t count_points_same_field(const WeierstrassCurve& E) {
  const FqField& F = *E.F;
  auto [a1, a2, a3, a4, a6] = E.a;
  std::uint64_t n = 1;
  const std::uint32_t q = F.size();
  if (F.p() == 2) {
    for (Elem x = 0; x < q; ++x) {
      Elem b = F.add(F.mul(a1, x), a3);
      Elem c = F.add(F.mul(F.add(F.mul(F.add(x, a2), x), a4), x), a6);
      if (b == 0) {
        n += 1;
      } else if (F.artin_schreier(F.div(c, F.mul(b, b)))) {
        n += 2;
      }
    }
    return n;
  }
  Elem four = F.from_int(4);
  for (Elem x = 0; x < q; ++x) {
    Elem b = F.add(F.mul(a1, x), a3);
    Elem c = F.add(F.mul(F.add(F.mul(F.add(x, a2), x), a4), x), a6);
    n += 1 + F.chi(F.add(F.mul(b, b), F.mul(four, c)));
  }
  return n;
}

}  // namespace

std::uint64_t point_count(const WeierstrassCurve& E, unsigned r, std::uint64_t maxField) {
  if (!is_smooth(E)) throw Error("singular curve: discriminant is zero");
  if (r == 0) throw Error("extension degree must be positive");
  if (r == 1) return count_points_same_field(E);
  FieldPtr L = field(E.F->p(), E.F->degree() * r, maxField);
  return count_points_same_field(base_change(E, L));
}

std::int64_t trace_of_frobenius(const WeierstrassCurve& E) {
  return static_cast<std::int64_t>(E.F->size()) + 1 -
         static_cast<std::int64_t>(point_count(E, 1));
}

mpz_class trace_over_extension(std::int64_t a1, std::uint64_t q, unsigned r) {
  mpz_class prev = 2, cur = a1, Q = static_cast<unsigned long>(q);
  if (r == 0) return prev;
  for (unsigned i = 1; i < r; ++i) {
    mpz_class nxt = a1 * cur - Q * prev;
    prev = cur;
    cur = nxt;
  }
  return cur;
}

std::vector<CoordChange> automorphisms(const WeierstrassCurve& E) {
  if (!is_smooth(E)) throw Error("singular curve: discriminant is zero");
  const FqField& F = *E.F;
  Ops o{F};
  const std::uint32_t q = F.size();
  auto [a1, a2, a3, a4, a6] = E.a;
  std::vector<CoordChange> out;
  for (Elem u = 1; u < q; ++u) {
    for (Elem s = 0; s < q; ++s) {
      if (o.add(a1, o.mul(o.k(2), s)) != o.mul(u, a1)) continue;
      for (Elem r = 0; r < q; ++r) {
        Elem u2 = o.mul(u, u);
        if (o.sub(o.add(o.sub(a2, o.mul(s, a1)), o.mul(o.k(3), r)), o.mul(s, s)) != o.mul(u2, a2))
          continue;
        for (Elem t = 0; t < q; ++t) {
          CoordChange c{u, r, s, t};
          if (transform(E, c).a == E.a) out.push_back(c);
        }
      }
    }
  }
  return out;
}

unsigned aut_order(const WeierstrassCurve& E) {
  return static_cast<unsigned>(automorphisms(E).size());
}

CurveGroup::CurveGroup(WeierstrassCurve E) : E_(std::move(E)) {}

bool CurveGroup::on_curve(const Point& P) const {
  if (P.inf) return true;
  const FqField& F = *E_.F;
  auto [a1, a2, a3, a4, a6] = E_.a;
  Elem lhs = F.add(F.mul(P.y, P.y), F.mul(F.add(F.mul(a1, P.x), a3), P.y));
  Elem rhs = F.add(F.mul(F.add(F.mul(F.add(P.x, a2), P.x), a4), P.x), a6);
  return lhs == rhs;
}

Point CurveGroup::neg(const Point& P) const {
  if (P.inf) return P;
  const FqField& F = *E_.F;
  return {P.x, F.sub(F.neg(P.y), F.add(F.mul(E_.a[0], P.x), E_.a[2])), false};
}

Point CurveGroup::add(const Point& P, const Point& Q) const {
  if (P.inf) return Q;
  if (Q.inf) return P;
  const FqField& F = *E_.F;
  Ops o{F};
  auto [a1, a2, a3, a4, a6] = E_.a;
  Elem lam, nu;
  if (P.x == Q.x) {
    if (o.add(o.add(P.y, Q.y), o.add(o.mul(a1, Q.x), a3)) == 0) return Point{};
    Elem den = o.add(o.add(o.mul(o.k(2), P.y), o.mul(a1, P.x)), a3);
    Elem x2 = o.mul(P.x, P.x);
    Elem num = o.sub(o.add(o.add(o.mul(o.k(3), x2), o.mul(o.k(2), o.mul(a2, P.x))), a4), o.mul(a1, P.y));
    Elem num2 = o.sub(o.add(o.add(F.neg(o.mul(x2, P.x)), o.mul(a4, P.x)), o.mul(o.k(2), a6)), o.mul(a3, P.y));
    lam = F.div(num, den);
    nu = F.div(num2, den);
  } else {
    Elem den = o.sub(Q.x, P.x);
    lam = F.div(o.sub(Q.y, P.y), den);
    nu = F.div(o.sub(o.mul(P.y, Q.x), o.mul(Q.y, P.x)), den);
  }
  Elem x3 = o.sub(o.sub(o.sub(o.add(o.mul(lam, lam), o.mul(a1, lam)), a2), P.x), Q.x);
  Elem y3 = o.sub(o.sub(F.neg(o.mul(o.add(lam, a1), x3)), nu), a3);
  return {x3, y3, false};
}

Point CurveGroup::mul(std::int64_t k, const Point& P) const {
  Point base = k < 0 ? neg(P) : P;
  std::uint64_t e = static_cast<std::uint64_t>(k < 0 ? -k : k);
  Point r{};
  while (e) {
    if (e & 1) r = add(r, base);
    e >>= 1;
    if (e) base = add(base, base);
  }
  return r;
}

std::vector<Point> CurveGroup::points() const {
  const FqField& F = *E_.F;
  auto [a1, a2, a3, a4, a6] = E_.a;
  std::vector<Point> out;
  const std::uint32_t q = F.size();
  for (Elem x = 0; x < q; ++x) {
    Elem b = F.add(F.mul(a1, x), a3);
    Elem c = F.add(F.mul(F.add(F.mul(F.add(x, a2), x), a4), x), a6);
    if (F.p() == 2) {
      if (b == 0) {
        out.push_back({x, *F.sqrt(c), false});
      } else if (auto z = F.artin_schreier(F.div(c, F.mul(b, b)))) {
        out.push_back({x, F.mul(b, *z), false});
        out.push_back({x, F.mul(b, F.add(*z, 1)), false});
      }
    } else {
      Elem D = F.add(F.mul(b, b), F.mul(F.from_int(4), c));
      auto r = F.sqrt(D);
      if (!r) continue;
      Elem half = F.inv(F.from_int(2));
      Elem y1 = F.mul(F.sub(*r, b), half);
      out.push_back({x, y1, false});
      if (*r != 0) out.push_back({x, F.mul(F.sub(F.neg(*r), b), half), false});
    }
  }
  out.push_back(Point{});
  std::sort(out.begin(), out.end());
  return out;
}

Mat2 mat_mul(const Mat2& x, const Mat2& y, int N) {
  return {mod(1LL * x.a * y.a + 1LL * x.b * y.c, N), mod(1LL * x.a * y.b + 1LL * x.b * y.d, N),
          mod(1LL * x.c * y.a + 1LL * x.d * y.c, N), mod(1LL * x.c * y.b + 1LL * x.d * y.d, N)};
}

int mat_det(const Mat2& x, int N) { return mod(1LL * x.a * x.d - 1LL * x.b * x.c, N); }
int mat_trace(const Mat2& x, int N) { return mod(x.a + x.d, N); }

Mat2 mat_inv(const Mat2& x, int N) {
  int d = mat_det(x, N);
  int di = -1;
  for (int i = 0; i < N; ++i)
    if (mod(1LL * d * i, N) == 1 % N) {
      di = i;
      break;
    }
  if (di < 0) throw Error("matrix is not invertible mod N");
  return {mod(1LL * x.d * di, N), mod(-1LL * x.b * di, N), mod(-1LL * x.c * di, N),
          mod(1LL * x.a * di, N)};
}

std::vector<Mat2> gl2(int N) {
  std::vector<Mat2> out;
  if (N == 1) return {Mat2{0, 0, 0, 0}};
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b)
      for (int c = 0; c < N; ++c)
        for (int d = 0; d < N; ++d) {
          Mat2 m{a, b, c, d};
          if (std::gcd(mat_det(m, N), N) == 1) out.push_back(m);
        }
  return out;
}

namespace {
std::size_t mat_index(const Mat2& m, int N) {
  return static_cast<std::size_t>(((m.a * N + m.b) * N + m.c) * N + m.d);
}
}  // namespace

void LevelStructureSpec::close() {
  if (N == 1) {
    closure = {Mat2{0, 0, 0, 0}};
    member_.assign(1, 1);
    minusId = true;
    fullDet = true;
    return;
  }
  const std::size_t sz = static_cast<std::size_t>(N) * N * N * N;
  member_.assign(sz, 0);
  Mat2 id{1 % N, 0, 0, 1 % N};
  std::vector<Mat2> frontier{id};
  member_[mat_index(id, N)] = 1;
  closure = {id};
  while (!frontier.empty()) {
    std::vector<Mat2> next;
    for (const auto& m : frontier)
      for (const auto& g : generators) {
        if (std::gcd(mat_det(g, N), N) != 1) throw Error("level generator is not invertible mod N");
        Mat2 h = mat_mul(m, g, N);
        auto i = mat_index(h, N);
        if (!member_[i]) {
          member_[i] = 1;
          closure.push_back(h);
          next.push_back(h);
        }
      }
    frontier = std::move(next);
  }
  std::sort(closure.begin(), closure.end());
  minusId = contains(Mat2{N - 1, 0, 0, N - 1});
  std::set<int> dets;
  for (const auto& m : closure) dets.insert(mat_det(m, N));
  int units = 0;
  for (int i = 0; i < N; ++i)
    if (std::gcd(i, N) == 1) ++units;
  fullDet = static_cast<int>(dets.size()) == units;
}

bool LevelStructureSpec::contains(const Mat2& m) const {
  if (N == 1) return true;
  Mat2 r{mod(m.a, N), mod(m.b, N), mod(m.c, N), mod(m.d, N)};
  return member_[mat_index(r, N)] != 0;
}

std::string LevelStructureSpec::key() const {
  std::ostringstream os;
  os << "N" << N << ":";
  for (const auto& g : generators) os << "[" << g.a << "," << g.b << "," << g.c << "," << g.d << "]";
  return os.str();
}

LevelStructureSpec LevelStructureSpec::level_one() {
  LevelStructureSpec H;
  H.N = 1;
  H.name = "level1";
  H.representable = false;
  H.close();
  return H;
}

LevelStructureSpec LevelStructureSpec::full(int N) {
  if (N == 1) return level_one();
  return from_generators(N, gl2(N), false, "full(" + std::to_string(N) + ")");
}

LevelStructureSpec LevelStructureSpec::gamma1(int N) {
  if (N == 1) return level_one();
  std::vector<Mat2> gens;
  for (int b = 0; b < N; ++b)
    for (int d = 0; d < N; ++d)
      if (std::gcd(d, N) == 1) gens.push_back({1, b, 0, d});
  return from_generators(N, gens, N >= 4, "gamma1(" + std::to_string(N) + ")");
}

LevelStructureSpec LevelStructureSpec::gamma0(int N) {
  if (N == 1) return level_one();
  std::vector<Mat2> gens;
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b)
      for (int d = 0; d < N; ++d)
        if (std::gcd(a, N) == 1 && std::gcd(d, N) == 1) gens.push_back({a, b, 0, d});
  return from_generators(N, gens, false, "gamma0(" + std::to_string(N) + ")");
}

LevelStructureSpec LevelStructureSpec::from_generators(int N, std::vector<Mat2> gens,
                                                       bool representable, std::string name) {
  if (N < 1) throw Error("level must be positive");
  LevelStructureSpec H;
  H.N = N;
  H.name = std::move(name);
  for (auto& g : gens) g = Mat2{mod(g.a, N), mod(g.b, N), mod(g.c, N), mod(g.d, N)};
  H.generators = std::move(gens);
  H.representable = representable;
  H.close();
  return H;
}

LevelStructureSpec LevelStructureSpec::by_name(const std::string& s) {
  if (s == "1" || s == "level1") return level_one();
  auto arg = [&](const std::string& pre) -> int {
    if (s.rfind(pre + "(", 0) == 0 && s.back() == ')')
      return std::stoi(s.substr(pre.size() + 1, s.size() - pre.size() - 2));
    return -1;
  };
  if (int n = arg("gamma1"); n > 0) return gamma1(n);
  if (int n = arg("gamma0"); n > 0) return gamma0(n);
  if (int n = arg("full"); n > 0) return full(n);
  throw Error("unknown level structure '" + s +
              "' (use 1, gamma1(N), gamma0(N) or full(N))");
}

FrobeniusMatrix frobenius_matrix(const WeierstrassCurve& E, int N, std::uint64_t maxField,
                                 bool withAutomorphisms) {
  if (!is_smooth(E)) throw Error("singular curve: discriminant is zero");
  const std::uint64_t q = E.F->size();
  if (N < 1) throw Error("level must be positive");
  if (std::gcd<std::uint64_t, std::uint64_t>(q, N) != 1) throw Error("level N is not coprime to q");
  FrobeniusMatrix fm;
  fm.N = N;
  std::vector<CoordChange> auts;
  if (withAutomorphisms) auts = automorphisms(E);
  if (N == 1) {
    fm.matrix = Mat2{0, 0, 0, 0};
    fm.ext = E.F;
    fm.autMatrices.assign(auts.size(), Mat2{0, 0, 0, 0});
    return fm;
  }
  std::int64_t a1 = trace_of_frobenius(E);
  for (unsigned r = 1;; ++r) {
    mpz_class qr = 1;
    for (unsigned i = 0; i < r; ++i) qr *= static_cast<unsigned long>(q);
    if (qr > maxField)
      throw BudgetError("splitting field of E[" + std::to_string(N) + "] exceeds the cap " +
                        std::to_string(maxField) + " (raise with --max-field-size)");
    if ((qr - 1) % N != 0) continue;
    mpz_class card = qr + 1 - trace_over_extension(a1, q, r);
    if (card % (N * N) != 0) continue;
    FieldPtr L = field(E.F->p(), E.F->degree() * r, maxField);
    CurveGroup G(base_change(E, L));
    std::vector<Point> tors;
    for (const auto& P : G.points())
      if (G.mul(N, P).inf) tors.push_back(P);
    if (static_cast<int>(tors.size()) != N * N) continue;
    auto fs = prime_factors(static_cast<std::uint64_t>(N));
    auto exact = [&](const Point& P) {
      for (auto f : fs)
        if (G.mul(N / static_cast<int>(f), P).inf) return false;
      return true;
    };
    std::map<Point, std::pair<int, int>> coords;
    Point P1{};
    for (const auto& P : tors)
      if (exact(P)) {
        P1 = P;
        break;
      }
    bool found = false;
    for (const auto& P2 : tors) {
      if (!exact(P2)) continue;
      coords.clear();
      Point Ra{};
      for (int a = 0; a < N; ++a) {
        Point R = Ra;
        for (int b = 0; b < N; ++b) {
          coords.emplace(R, std::make_pair(a, b));
          R = G.add(R, P2);
        }
        Ra = G.add(Ra, P1);
      }
      if (static_cast<int>(coords.size()) == N * N) {
        fm.P1 = P1;
        fm.P2 = P2;
        found = true;
        break;
      }
    }
    if (!found) throw Error("internal: no basis of E[N] found");
    const FqField& LF = *L;
    auto frob = [&](const Point& P) {
      if (P.inf) return P;
      return Point{LF.pow(P.x, static_cast<std::int64_t>(q)), LF.pow(P.y, static_cast<std::int64_t>(q)), false};
    };
    auto matrix_of = [&](auto&& map) {
      auto c1 = coords.at(map(fm.P1));
      auto c2 = coords.at(map(fm.P2));
      return Mat2{c1.first, c2.first, c1.second, c2.second};
    };
    fm.matrix = matrix_of(frob);
    fm.extDegree = r;
    fm.ext = L;
    for (const auto& c : auts) {
      Elem u = embed(*E.F, c.u, LF), rr = embed(*E.F, c.r, LF), s = embed(*E.F, c.s, LF),
           t = embed(*E.F, c.t, LF);
      Elem ui = LF.inv(u);
      Elem ui2 = LF.mul(ui, ui), ui3 = LF.mul(ui2, ui);
      auto alpha = [&](const Point& P) {
        if (P.inf) return P;
        Elem xr = LF.sub(P.x, rr);
        return Point{LF.mul(xr, ui2), LF.mul(LF.sub(LF.sub(P.y, LF.mul(s, xr)), t), ui3), false};
      };
      fm.autMatrices.push_back(matrix_of(alpha));
    }
    if (mat_trace(fm.matrix, N) != mod(a1, N) || mat_det(fm.matrix, N) != static_cast<int>(q % N))
      throw Error("internal: Frobenius matrix violates trace/determinant constraints");
    return fm;
  }
}

StructureCount count_structures(const FrobeniusMatrix& fm, const LevelStructureSpec& H) {
  if (fm.N != H.N) throw Error("level mismatch between Frobenius matrix and H");
  StructureCount sc;
  const int N = H.N;
  if (N == 1) {
    sc.fixed = 1;
    sc.stabilizers.push_back(fm.autMatrices.empty() ? 1 : fm.autMatrices.size());
    return sc;
  }
  auto G = gl2(N);
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(N) * N * N * N, 0);
  std::uint64_t hits = 0;
  for (const auto& g : G) {
    Mat2 gi = mat_inv(g, N);
    if (!H.contains(mat_mul(mat_mul(gi, fm.matrix, N), g, N))) continue;
    ++hits;
    if (seen[mat_index(g, N)]) continue;
    for (const auto& h : H.closure) seen[mat_index(mat_mul(g, h, N), N)] = 1;
    std::uint64_t stab = 0;
    for (const auto& A : fm.autMatrices)
      if (H.contains(mat_mul(mat_mul(gi, A, N), g, N))) ++stab;
    sc.stabilizers.push_back(stab);
  }
  if (hits % H.closure.size() != 0) throw Error("internal: fixed count not divisible by |H|");
  sc.fixed = hits / H.closure.size();
  if (sc.fixed != sc.stabilizers.size()) throw Error("internal: coset bookkeeping mismatch");
  return sc;
}

std::uint64_t count_H_structures(const WeierstrassCurve& E, const LevelStructureSpec& H,
                                 std::uint64_t maxField) {
  return count_structures(frobenius_matrix(E, H.N, maxField, false), H).fixed;
}

namespace {

std::vector<CurveClass> classes_odd(const FieldPtr& Fp) {
  const FqField& F = *Fp;
  Ops o{F};
  const std::uint64_t q = F.size();
  const std::uint64_t total = q * q * q;
  std::vector<std::uint8_t> seen(total, 0);
  std::vector<CurveClass> out;
  Elem three = o.k(3), two = o.k(2);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    if (seen[idx]) continue;
    Elem a2 = static_cast<Elem>(idx % q), a4 = static_cast<Elem>((idx / q) % q),
         a6 = static_cast<Elem>(idx / (q * q));
    WeierstrassCurve E{Fp, {0, a2, 0, a4, a6}};
    if (!is_smooth(E)) {
      seen[idx] = 1;
      continue;
    }
    unsigned stab = 0;
    std::uint64_t orbit = 0;
    for (Elem u = 1; u < q; ++u) {
      Elem ui = F.inv(u), ui2 = o.mul(ui, ui), ui4 = o.mul(ui2, ui2), ui6 = o.mul(ui4, ui2);
      for (Elem r = 0; r < q; ++r) {
        Elem r2 = o.mul(r, r);
        Elem b2 = o.mul(o.add(a2, o.mul(three, r)), ui2);
        Elem b4 = o.mul(o.add(o.add(a4, o.mul(two, o.mul(r, a2))), o.mul(three, r2)), ui4);
        Elem b6 = o.mul(o.add(o.add(o.add(a6, o.mul(r, a4)), o.mul(r2, a2)), o.mul(r2, r)), ui6);
        std::uint64_t j = b2 + q * (b4 + q * static_cast<std::uint64_t>(b6));
        if (j == idx) ++stab;
        if (!seen[j]) {
          seen[j] = 1;
          ++orbit;
        }
      }
    }
    if (orbit * stab != q * (q - 1)) throw Error("internal: orbit-stabilizer mismatch");
    CurveClass c;
    c.representative = E;
    c.autOrder = stab;
    c.a1 = trace_of_frobenius(E);
    c.jInvariant = j_invariant(E);
    c.classSize = q * q * q * (q - 1) / stab;
    out.push_back(c);
  }
  return out;
}

std::vector<CurveClass> classes_char2(const FieldPtr& Fp) {
  const FqField& F = *Fp;
  const std::uint64_t q = F.size();
  std::uint64_t total = q * q * q * q * q;
  if (total > (std::uint64_t(1) << 26)) throw BudgetError("characteristic-2 class enumeration limited to q <= 32");
  std::vector<std::uint8_t> seen(total, 0);
  auto enc = [&](const std::array<Elem, 5>& a) {
    std::uint64_t v = 0;
    for (int i = 4; i >= 0; --i) v = v * q + a[i];
    return v;
  };
  std::vector<CurveClass> out;
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    if (seen[idx]) continue;
    std::array<Elem, 5> a{};
    std::uint64_t t = idx;
    for (int i = 0; i < 5; ++i) {
      a[i] = static_cast<Elem>(t % q);
      t /= q;
    }
    WeierstrassCurve E{Fp, a};
    if (!is_smooth(E)) {
      seen[idx] = 1;
      continue;
    }
    unsigned stab = 0;
    std::uint64_t orbit = 0;
    for (Elem u = 1; u < q; ++u)
      for (Elem r = 0; r < q; ++r)
        for (Elem s = 0; s < q; ++s)
          for (Elem tt = 0; tt < q; ++tt) {
            auto j = enc(transform(E, {u, r, s, tt}).a);
            if (j == idx) ++stab;
            if (!seen[j]) {
              seen[j] = 1;
              ++orbit;
            }
          }
    if (orbit * stab != q * q * q * (q - 1)) throw Error("internal: orbit-stabilizer mismatch");
    CurveClass c;
    c.representative = E;
    c.autOrder = stab;
    c.a1 = trace_of_frobenius(E);
    c.jInvariant = j_invariant(E);
    c.classSize = orbit;
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::vector<CurveClass> iso_classes(const FieldPtr& F, unsigned) {
  auto out = F->p() == 2 ? classes_char2(F) : classes_odd(F);
  mpq_class mass = 0;
  for (const auto& c : out) mass += mpq_class(1, c.autOrder);
  if (mass != F->size()) throw Error("internal: mass formula violated");
  return out;
}

unsigned nu_ell(const LevelStructureSpec& H, const FieldPtr& F, unsigned ell, std::uint64_t maxField) {
  unsigned best = 0;
  for (const auto& c : iso_classes(F)) {
    auto fm = frobenius_matrix(c.representative, H.N, maxField, true);
    auto sc = count_structures(fm, H);
    for (auto st : sc.stabilizers) {
      unsigned v = 0;
      while (st % ell == 0) {
        st /= ell;
        ++v;
      }
      best = std::max(best, v);
    }
  }
  return best;
}

std::map<std::int64_t, mpz_class> raw_equation_counts(const FieldPtr& Fp, const LevelStructureSpec& H,
                                                      unsigned threads, std::uint64_t maxField) {
  const std::uint64_t q = Fp->size();
  const std::uint64_t total = q * q * q * q * q;
  if (total > (std::uint64_t(1) << 26))
    throw BudgetError("raw equation enumeration limited to q^5 <= 2^26");
  if (threads == 0) threads = 1;
  std::vector<std::map<std::int64_t, mpz_class>> part(threads);
  auto work = [&](unsigned w) {
    for (std::uint64_t idx = w; idx < total; idx += threads) {
      std::array<Elem, 5> a{};
      std::uint64_t t = idx;
      for (int i = 0; i < 5; ++i) {
        a[i] = static_cast<Elem>(t % q);
        t /= q;
      }
      WeierstrassCurve E{Fp, a};
      if (!is_smooth(E)) continue;
      std::int64_t a1 = trace_of_frobenius(E);
      std::uint64_t fixed = H.N == 1 ? 1 : count_H_structures(E, H, maxField);
      part[w][a1] += static_cast<unsigned long>(fixed);
    }
  };
  std::vector<std::thread> ts;
  for (unsigned w = 1; w < threads; ++w) ts.emplace_back(work, w);
  work(0);
  for (auto& th : ts) th.join();
  std::map<std::int64_t, mpz_class> out;
  for (auto& m : part)
    for (auto& [k, v] : m) out[k] += v;
  return out;
}

}  // namespace modtrace
