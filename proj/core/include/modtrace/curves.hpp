#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "modtrace/ffield.hpp"

namespace modtrace {

using Elem = FqField::Elem;

struct WeierstrassCurve {
  FieldPtr F;
  std::array<Elem, 5> a{};  // a1, a2, a3, a4, a6

  Elem a1() const { return a[0]; }
  Elem a2() const { return a[1]; }
  Elem a3() const { return a[2]; }
  Elem a4() const { return a[3]; }
  Elem a6() const { return a[4]; }
  std::string str() const;
};

struct CurveInvariants {
  Elem b2, b4, b6, b8, c4, c6, disc;
};

CurveInvariants invariants(const WeierstrassCurve& E);
bool is_smooth(const WeierstrassCurve& E);
Elem j_invariant(const WeierstrassCurve& E);
WeierstrassCurve base_change(const WeierstrassCurve& E, const FieldPtr& L);

// x = u^2 x' + r, y = u^3 y' + u^2 s x' + t
struct CoordChange {
  Elem u = 1, r = 0, s = 0, t = 0;
};

WeierstrassCurve transform(const WeierstrassCurve& E, const CoordChange& c);

std::uint64_t point_count(const WeierstrassCurve& E, unsigned r = 1,
                          std::uint64_t maxField = kDefaultMaxFieldSize);
std::int64_t trace_of_frobenius(const WeierstrassCurve& E);
// a_r from a_1 via a_r = a_1 a_{r-1} - q a_{r-2}
mpz_class trace_over_extension(std::int64_t a1, std::uint64_t q, unsigned r);

std::vector<CoordChange> automorphisms(const WeierstrassCurve& E);
unsigned aut_order(const WeierstrassCurve& E);

struct Point {
  Elem x = 0, y = 0;
  bool inf = true;
  bool operator==(const Point& o) const {
    return inf == o.inf && (inf || (x == o.x && y == o.y));
  }
  bool operator<(const Point& o) const {
    if (inf != o.inf) return o.inf;
    if (x != o.x) return x < o.x;
    return y < o.y;
  }
};

class CurveGroup {
 public:
  explicit CurveGroup(WeierstrassCurve E);
  const WeierstrassCurve& curve() const { return E_; }
  bool on_curve(const Point& P) const;
  Point neg(const Point& P) const;
  Point add(const Point& P, const Point& Q) const;
  Point mul(std::int64_t k, const Point& P) const;
  std::vector<Point> points() const;

 private:
  WeierstrassCurve E_;
};

// 2x2 matrices over Z/N; columns are images of the basis vectors
struct Mat2 {
  int a = 1, b = 0, c = 0, d = 1;
  bool operator==(const Mat2& o) const { return a == o.a && b == o.b && c == o.c && d == o.d; }
  bool operator<(const Mat2& o) const {
    return std::array<int, 4>{a, b, c, d} < std::array<int, 4>{o.a, o.b, o.c, o.d};
  }
};

Mat2 mat_mul(const Mat2& x, const Mat2& y, int N);
Mat2 mat_inv(const Mat2& x, int N);
int mat_det(const Mat2& x, int N);
int mat_trace(const Mat2& x, int N);
std::vector<Mat2> gl2(int N);

struct LevelStructureSpec {
  int N = 1;
  std::string name;
  std::vector<Mat2> generators;
  std::vector<Mat2> closure;
  bool minusId = true;
  bool fullDet = true;
  bool representable = false;

  static LevelStructureSpec level_one();
  static LevelStructureSpec full(int N);
  // stabilizer of the first basis vector: rational points of exact order N
  static LevelStructureSpec gamma1(int N);
  // upper triangular mod N
  static LevelStructureSpec gamma0(int N);
  static LevelStructureSpec from_generators(int N, std::vector<Mat2> gens, bool representable,
                                            std::string name = "custom");
  static LevelStructureSpec by_name(const std::string& name);

  bool contains(const Mat2& m) const;
  std::string key() const;

 private:
  void close();
  std::vector<std::uint8_t> member_;
};

struct FrobeniusMatrix {
  int N = 1;
  Mat2 matrix;
  unsigned extDegree = 1;
  FieldPtr ext;
  Point P1, P2;
  // action of each F_q-automorphism of E on the chosen basis
  std::vector<Mat2> autMatrices;
};

FrobeniusMatrix frobenius_matrix(const WeierstrassCurve& E, int N,
                                 std::uint64_t maxField = kDefaultMaxFieldSize,
                                 bool withAutomorphisms = false);

// Frobenius-fixed H-structures, with stabilizer orders under Aut(E)
struct StructureCount {
  std::uint64_t fixed = 0;
  std::vector<std::uint64_t> stabilizers;  // one entry per fixed structure
};

StructureCount count_structures(const FrobeniusMatrix& fm, const LevelStructureSpec& H);
std::uint64_t count_H_structures(const WeierstrassCurve& E, const LevelStructureSpec& H,
                                 std::uint64_t maxField = kDefaultMaxFieldSize);

struct CurveClass {
  WeierstrassCurve representative;
  std::int64_t a1 = 0;
  unsigned autOrder = 0;
  Elem jInvariant = 0;
  std::uint64_t classSize = 0;
};

std::vector<CurveClass> iso_classes(const FieldPtr& F, unsigned threads = 1);

unsigned nu_ell(const LevelStructureSpec& H, const FieldPtr& F, unsigned ell,
                std::uint64_t maxField = kDefaultMaxFieldSize);

// exhaustive sum over all smooth long Weierstrass equations of w(a1, fixed)
// keyed by a1: total fixed-structure count per trace value
std::map<std::int64_t, mpz_class> raw_equation_counts(const FieldPtr& F,
                                                      const LevelStructureSpec& H,
                                                      unsigned threads = 1,
                                                      std::uint64_t maxField = kDefaultMaxFieldSize);

}  // namespace modtrace
