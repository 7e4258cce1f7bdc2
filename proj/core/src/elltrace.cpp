#include "modtrace/elltrace.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "modtrace/congruences.hpp"

namespace modtrace {

namespace {

mpq_class frac(const mpz_class& a, const mpz_class& b) {
  mpq_class r(a, b);
  r.canonicalize();
  return r;
}

unsigned valuation(std::uint64_t x, unsigned ell) {
  unsigned v = 0;
  while (x && x % ell == 0) {
    x /= ell;
    ++v;
  }
  return v;
}

std::mutex gDistMu;
std::map<std::string, TraceDistribution> gDistCache;

std::string dist_key(const FieldPtr& F, const LevelStructureSpec& H, const char* path) {
  return std::to_string(F->p()) + "^" + std::to_string(F->degree()) + "|" + H.key() + "|" + path;
}

TraceDistribution blank(const FieldPtr& F, const LevelStructureSpec& H) {
  TraceDistribution D;
  D.q = F->size();
  D.p = F->p();
  D.a = F->degree();
  D.modulus = F->modulus();
  D.H = H;
  return D;
}

}  // namespace

mpz_class TraceDistribution::weight_denominator() const {
  mpz_class L = 1;
  for (const auto& [t, w] : weight) mpz_lcm(L.get_mpz_t(), L.get_mpz_t(), w.get_den_mpz_t());
  return L;
}

TraceDistribution distribution_from_classes(const FieldPtr& F, const LevelStructureSpec& H,
                                            const EnumOptions& opt) {
  {
    std::lock_guard<std::mutex> g(gDistMu);
    auto it = gDistCache.find(dist_key(F, H, "classes"));
    if (it != gDistCache.end()) return it->second;
  }
  if (std::gcd<std::uint64_t, std::uint64_t>(F->size(), H.N) != 1)
    throw Error("level N is not coprime to q");
  std::uint64_t q = F->size();
  if (F->p() != 2 && q * q * q > (std::uint64_t(1) << 28))
    throw BudgetError("class enumeration needs q^3 <= 2^28 (level 1 with p >= 5 uses the j-line instead)");
  TraceDistribution D = blank(F, H);
  D.path = "classes";
  for (const auto& c : iso_classes(F, opt.threads)) {
    if (H.N == 1) {
      D.weight[c.a1] += frac(1, c.autOrder);
      D.classes[c.a1] += 1;
      D.nu2 = std::max(D.nu2, valuation(c.autOrder, 2));
      D.nu3 = std::max(D.nu3, valuation(c.autOrder, 3));
      continue;
    }
    auto fm = frobenius_matrix(c.representative, H.N, opt.maxField, true);
    auto sc = count_structures(fm, H);
    if (sc.fixed == 0) continue;
    D.weight[c.a1] += frac(static_cast<unsigned long>(sc.fixed), c.autOrder);
    std::uint64_t stabSum = 0;
    for (auto st : sc.stabilizers) {
      stabSum += st;
      D.nu2 = std::max(D.nu2, valuation(st, 2));
      D.nu3 = std::max(D.nu3, valuation(st, 3));
    }
    if (stabSum % c.autOrder) throw Error("internal: orbit count is not integral");
    D.classes[c.a1] += static_cast<unsigned long>(stabSum / c.autOrder);
  }
  std::lock_guard<std::mutex> g(gDistMu);
  gDistCache.emplace(dist_key(F, H, "classes"), D);
  return D;
}

TraceDistribution level_one_jline(const FieldPtr& Fp, const EnumOptions& opt) {
  const FqField& F = *Fp;
  if (F.p() < 5) throw Error("j-line enumeration needs characteristic at least 5");
  auto H = LevelStructureSpec::level_one();
  {
    std::lock_guard<std::mutex> g(gDistMu);
    auto it = gDistCache.find(dist_key(Fp, H, "j-line"));
    if (it != gDistCache.end()) return it->second;
  }
  const std::uint32_t q = F.size(), q1 = q - 1;
  const Elem minusOne = F.neg(1);
  const int chiMinusOne = F.chi(minusOne);

  // chi(1 + g^i)
  std::vector<std::int8_t> zchi(q1);
  for (std::uint32_t i = 0; i < q1; ++i) zchi[i] = static_cast<std::int8_t>(F.chi(F.add(1, F.exp(i))));
  // x not in {0, -1}: log of x^3/(x+1) and chi(x+1)
  std::vector<std::uint32_t> lx;
  std::vector<std::int8_t> sx;
  lx.reserve(q);
  sx.reserve(q);
  for (Elem x = 1; x < q; ++x) {
    if (x == minusOne) continue;
    Elem x1 = F.add(x, 1);
    lx.push_back(F.log(F.div(F.mul(x, F.mul(x, x)), x1)));
    sx.push_back(static_cast<std::int8_t>(F.chi(x1)));
  }
  const Elem bad = F.div(F.from_int(-27), F.from_int(4));

  // Frobenius orbit representatives of c
  std::vector<std::uint8_t> seen(q, 0);
  std::vector<std::pair<Elem, unsigned>> reps;
  for (Elem c = 1; c < q; ++c) {
    if (seen[c] || c == bad) continue;
    unsigned len = 0;
    Elem d = c;
    do {
      seen[d] = 1;
      ++len;
      d = F.frob(d);
    } while (d != c);
    reps.emplace_back(c, len);
  }
  std::vector<std::int64_t> traces(reps.size());
  unsigned threads = std::max(1u, opt.threads);
  auto work = [&](unsigned w) {
    for (std::size_t i = w; i < reps.size(); i += threads) {
      Elem c = reps[i].first;
      std::uint32_t e = F.log(c);
      int chic = F.chi(c);
      std::int64_t acc = 0;
      const std::size_t n = lx.size();
      for (std::size_t t = 0; t < n; ++t) {
        std::int64_t idx = static_cast<std::int64_t>(lx[t]) - e;
        if (idx < 0) idx += q1;
        acc += sx[t] * zchi[static_cast<std::size_t>(idx)];
      }
      // x = -1 gives chi(-1); x = 0 gives chi(c)
      std::int64_t S = chiMinusOne + chic + chic * acc;
      traces[i] = -S;
    }
  };
  std::vector<std::thread> ts;
  for (unsigned w = 1; w < threads; ++w) ts.emplace_back(work, w);
  work(0);
  for (auto& th : ts) th.join();

  TraceDistribution D = blank(Fp, H);
  D.path = "j-line";
  const mpq_class half(1, 2);
  for (std::size_t i = 0; i < reps.size(); ++i) {
    std::int64_t t = traces[i];
    unsigned len = reps[i].second;
    D.weight[t] += half * len;
    D.weight[-t] += half * len;
    D.classes[t] += len;
    D.classes[-t] += len;
  }
  auto twists = [&](unsigned d, bool cubic) {
    for (unsigned i = 0; i < d; ++i) {
      Elem D0 = F.exp(i);
      WeierstrassCurve E{Fp, {0, 0, 0, cubic ? Elem(0) : D0, cubic ? D0 : Elem(0)}};
      std::int64_t t = trace_of_frobenius(E);
      D.weight[t] += frac(1, d);
      D.classes[t] += 1;
    }
  };
  unsigned d4 = std::gcd(4u, q1), d6 = std::gcd(6u, q1);
  twists(d4, false);
  twists(d6, true);
  D.nu2 = std::max(valuation(d4, 2), valuation(d6, 2));
  D.nu3 = valuation(d6, 3);
  mpq_class mass = 0;
  for (auto& [t, w] : D.weight) mass += w;
  if (mass != q) throw Error("internal: j-line mass differs from q");
  for (auto it = D.weight.begin(); it != D.weight.end();) {
    if (it->second == 0) {
      D.classes.erase(it->first);
      it = D.weight.erase(it);
    } else {
      ++it;
    }
  }
  std::lock_guard<std::mutex> g(gDistMu);
  gDistCache.emplace(dist_key(Fp, H, "j-line"), D);
  return D;
}

void clear_distribution_cache() {
  std::lock_guard<std::mutex> g(gDistMu);
  gDistCache.clear();
}

TraceDistribution distribution(const FieldPtr& F, const LevelStructureSpec& H, const EnumOptions& opt) {
  if (H.N == 1 && F->p() >= 5) return level_one_jline(F, opt);
  return distribution_from_classes(F, H, opt);
}

MomentTable moments(const TraceDistribution& D, unsigned maxK) {
  MomentTable M;
  M.p = D.p;
  M.a = D.a;
  M.modulus = D.modulus;
  M.N = D.H.N;
  M.generators = D.H.generators;
  M.maxK = maxK;
  mpz_class L = D.weight_denominator();
  std::vector<std::pair<mpz_class, mpz_class>> terms;  // (t, weight * L)
  for (const auto& [t, w] : D.weight) {
    mpz_class n(w * L);
    terms.emplace_back(mpz_class(static_cast<long>(t)), n);
  }
  M.moments.assign(maxK + 1, 0);
  std::vector<mpz_class> pw(terms.size(), 1);
  for (unsigned k = 0; k <= maxK; ++k) {
    mpz_class acc = 0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      acc += terms[i].second * pw[i];
      pw[i] *= terms[i].first;
    }
    if (!mpz_divisible_p(acc.get_mpz_t(), L.get_mpz_t()))
      throw Error("internal: moment [a_1^" + std::to_string(k) + "] is not an integer");
    mpz_divexact(acc.get_mpz_t(), acc.get_mpz_t(), L.get_mpz_t());
    M.moments[k] = acc;
  }
  return M;
}

std::string MomentTable::to_json() const {
  nlohmann::json j;
  j["version"] = kMomentCacheVersion;
  j["p"] = p;
  j["a"] = a;
  j["modulus"] = modulus;
  j["N"] = N;
  auto gens = nlohmann::json::array();
  for (const auto& g : generators) gens.push_back({g.a, g.b, g.c, g.d});
  j["H_generators"] = gens;
  j["maxK"] = maxK;
  auto ms = nlohmann::json::array();
  for (const auto& m : moments) ms.push_back(m.get_str());
  j["moments"] = ms;
  return j.dump();
}

MomentTable MomentTable::from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  if (j.at("version").get<int>() != kMomentCacheVersion) throw Error("moment cache version mismatch");
  MomentTable M;
  M.p = j.at("p").get<std::uint32_t>();
  M.a = j.at("a").get<unsigned>();
  M.modulus = j.at("modulus").get<FpPoly>();
  M.N = j.at("N").get<int>();
  for (const auto& g : j.at("H_generators")) M.generators.push_back({g[0], g[1], g[2], g[3]});
  M.maxK = j.at("maxK").get<unsigned>();
  for (const auto& s : j.at("moments")) M.moments.emplace_back(s.get<std::string>());
  if (M.moments.size() != M.maxK + 1) throw Error("moment cache is truncated");
  return M;
}

namespace {
std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}
}  // namespace

MomentTable moments(const FieldPtr& F, const LevelStructureSpec& H, unsigned maxK,
                    const std::string& cacheDir, const EnumOptions& opt, unsigned maxWeight) {
  if (maxK > maxWeight)
    throw BudgetError("moment order " + std::to_string(maxK) + " exceeds the cap " +
                      std::to_string(maxWeight) + " (raise with --max-weight)");
  namespace fs = std::filesystem;
  fs::path file;
  if (!cacheDir.empty()) {
    char name[96];
    std::snprintf(name, sizeof name, "moments-%u-%u-N%d-%016llx.json", F->p(), F->degree(), H.N,
                  static_cast<unsigned long long>(fnv1a(H.key())));
    file = fs::path(cacheDir) / name;
    if (fs::exists(file)) {
      std::ifstream in(file);
      std::stringstream ss;
      ss << in.rdbuf();
      try {
        MomentTable M = MomentTable::from_json(ss.str());
        if (M.p == F->p() && M.a == F->degree() && M.modulus == F->modulus() && M.N == H.N &&
            M.generators == H.generators && M.maxK >= maxK) {
          M.moments.resize(maxK + 1);
          M.maxK = maxK;
          return M;
        }
      } catch (const std::exception&) {
        // stale or foreign file: recompute
      }
    }
  }
  MomentTable M = moments(distribution(F, H, opt), maxK);
  if (!file.empty()) {
    fs::create_directories(file.parent_path());
    fs::path tmp = file;
    tmp += ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
    {
      std::ofstream out(tmp);
      out << M.to_json();
    }
    fs::rename(tmp, file);
  }
  return M;
}

SplitMoments split_moments(const TraceDistribution& D, unsigned ell, unsigned s, unsigned maxK) {
  SplitMoments S;
  S.ell = ell;
  S.s = s;
  S.momentsN.assign(maxK + 1, 0);
  S.momentsU.assign(maxK + 1, 0);
  for (const auto& [t, w] : D.weight) {
    bool inN = t % static_cast<std::int64_t>(ell) == 0;
    mpz_class pw = 1;
    for (unsigned k = 0; k <= maxK; ++k) {
      (inN ? S.momentsN : S.momentsU)[k] += w * pw;
      pw *= static_cast<long>(t);
    }
  }
  return S;
}

EisSpec EisSpec::level_one() {
  EisSpec e;
  e.evenValue = 1;
  e.oddValue = 0;
  e.h0 = 1;
  return e;
}

std::optional<mpz_class> eis_value(const EisSpec& eis, unsigned k) {
  return k % 2 == 0 ? eis.evenValue : eis.oddValue;
}

std::optional<mpz_class> epsilon(const TraceDistribution& D, const EisSpec& eis, unsigned k) {
  if (k > 0) return mpz_class(0);
  std::optional<mpz_class> h0 = eis.h0;
  if (!h0 && D.H.fullDet) h0 = 1;
  if (!h0) return std::nullopt;
  return -mpz_class(static_cast<unsigned long>(D.q + 1)) * *h0;
}

mpz_class trace_interior(const MomentTable& M, std::uint64_t q, unsigned k) {
  if (k > M.maxK) throw Error("moment table too short for this weight");
  mpz_class acc = 0;
  mpz_class mq = -mpz_class(static_cast<unsigned long>(q));
  mpz_class pw = 1;
  for (unsigned j = 0; 2 * j <= k; ++j) {
    acc += binomial(k - j, j) * pw * M.moments[k - 2 * j];
    pw *= mq;
  }
  return -acc;
}

mpz_class trace_interior(const TraceDistribution& D, unsigned k) {
  return trace_interior(moments(D, k), D.q, k);
}

TraceResult trace(const TraceDistribution& D, unsigned k, const EisSpec& eis) {
  TraceResult R;
  R.q = D.q;
  R.N = D.H.N;
  R.weight = k + 2;
  R.interior = trace_interior(D, k);
  auto e = eis_value(eis, k);
  auto eps = epsilon(D, eis, k);
  R.eisKnown = e.has_value();
  if (e && eps) R.value = R.interior - *e - *eps;
  return R;
}

std::uint64_t half_unit_order(unsigned ell, unsigned s) {
  if (ell == 2 && s == 1) return 1;
  std::uint64_t m = 1;
  for (unsigned i = 1; i < s; ++i) m *= ell;
  return m * (ell - 1) / 2;
}

mpz_class reduce_mod(const mpq_class& x, const mpz_class& m) {
  mpz_class inv;
  if (!mpz_invert(inv.get_mpz_t(), x.get_den_mpz_t(), m.get_mpz_t()) && m != 1)
    throw Error("denominator " + mpz_class(x.get_den()).get_str() + " is not invertible mod " + m.get_str() +
                " (non-representable level with small ell needs the valuation shift)");
  mpz_class r = x.get_num() * inv;
  r %= m;
  if (r < 0) r += m;
  return r;
}

SplitResult split_trace(const TraceDistribution& D, unsigned k, unsigned ell, unsigned s, const EisSpec& eis) {
  if (s == 0) throw Error("s must be positive");
  if (k + 1 < s) throw Error("split needs k >= s - 1");
  SplitResult R;
  R.ell = ell;
  R.s = s;
  R.k = k;
  R.modulus = ipow(ell, s);
  const unsigned delta = k % 2;
  const std::uint64_t m = half_unit_order(ell, s);
  const mpz_class mq = -mpz_class(static_cast<unsigned long>(D.q));
  const int jmax = static_cast<int>(s) - 1 - static_cast<int>(delta) >= 0
                       ? (static_cast<int>(s) - 1 - static_cast<int>(delta)) / 2
                       : -1;
  CoeffFamily fam(D.q, m);
  std::vector<mpz_class> fr(m);
  for (std::uint64_t r = 0; r < m; ++r) fr[r] = fam.value(static_cast<std::int64_t>(r), k);
  for (const auto& [t, w] : D.weight) {
    mpz_class T = static_cast<long>(t);
    if (t % static_cast<std::int64_t>(ell) == 0) {
      mpz_class acc = 0;
      for (int j = 0; j <= jmax; ++j)
        acc += binomial((k + delta) / 2 + j, 2 * j + delta) * ipow(mq, (k - delta) / 2 - j) *
               ipow(T, 2 * j + delta);
      R.N += w * acc;
    } else {
      mpz_class acc = 0;
      for (std::uint64_t r = 0; r < m; ++r) acc += fr[r] * ipow(T, 2 * r + delta);
      R.U += w * acc;
    }
  }
  R.Nmod = reduce_mod(R.N, R.modulus);
  R.Umod = reduce_mod(R.U, R.modulus);
  if (auto e = eis_value(eis, k)) {
    mpz_class v = (-*e - R.Nmod - R.Umod) % R.modulus;
    if (v < 0) v += R.modulus;
    R.reassembled = v;
  }
  return R;
}

mpq_class unfolded_U(const TraceDistribution& D, unsigned k, unsigned ell) {
  mpq_class U = 0;
  const mpz_class mq = -mpz_class(static_cast<unsigned long>(D.q));
  for (const auto& [t, w] : D.weight) {
    if (t % static_cast<std::int64_t>(ell) == 0) continue;
    mpz_class acc = 0;
    for (unsigned j = 0; 2 * j <= k; ++j)
      acc += binomial(k - j, j) * ipow(mq, j) * ipow(mpz_class(static_cast<long>(t)), k - 2 * j);
    U += w * acc;
  }
  return U;
}

unsigned factorial_valuation(unsigned ell, unsigned i) {
  unsigned v = 0;
  for (std::uint64_t pw = ell; pw <= i; pw *= ell) v += i / pw;
  return v;
}

RecurrenceSeed faculty_recurrence(unsigned ell, unsigned i, int shift) {
  RecurrenceSeed R;
  R.ell = ell;
  R.i = i;
  int t = static_cast<int>(factorial_valuation(ell, i)) + shift;
  R.exponent = t < 0 ? 0 : static_cast<unsigned>(t);
  ZPoly prod{1};
  for (unsigned j = 1; j <= i; ++j) prod = zp_mul(prod, ZPoly{-mpz_class(j), 1});
  // prod is low to high; c[j] is the coefficient of x^{i-j}
  R.c.assign(i + 1, 0);
  for (unsigned j = 0; j <= i; ++j) R.c[j] = prod[i - j];
  return R;
}

std::vector<mpz_class> moment_recurrence(const RecurrenceSeed& R, const std::vector<mpz_class>& seed,
                                         unsigned maxK) {
  if (seed.size() < R.i) throw Error("moment recurrence needs at least i seed moments");
  mpz_class mod = ipow(R.ell, R.exponent);
  std::vector<mpz_class> out(std::max<std::size_t>(maxK + 1, R.i));
  for (std::size_t k = 0; k < out.size(); ++k) {
    mpz_class v;
    if (k < R.i) {
      v = seed[k];
    } else {
      v = 0;
      for (unsigned j = 1; j <= R.i; ++j) v -= R.c[j] * out[k - j];
    }
    v %= mod;
    if (v < 0) v += mod;
    out[k] = v;
  }
  out.resize(maxK + 1);
  return out;
}

namespace {
mpq_class count_forms(std::int64_t disc, bool primitiveOnly) {
  if (disc >= 0) throw Error("discriminant must be negative");
  std::int64_t r = ((disc % 4) + 4) % 4;
  if (r != 0 && r != 1) throw Error("discriminant must be 0 or 1 mod 4");
  const std::int64_t D = -disc;
  mpq_class total = 0;
  for (std::int64_t a = 1; 3 * a * a <= D; ++a)
    for (std::int64_t b = -a + 1; b <= a; ++b) {
      if (((b - disc) % 2 + 2) % 2) continue;
      std::int64_t num = b * b + D;
      if (num % (4 * a)) continue;
      std::int64_t c = num / (4 * a);
      if (c < a) continue;
      if (a == c && b < 0) continue;
      if (primitiveOnly && std::gcd(std::gcd(a, std::abs(b)), c) != 1) continue;
      mpq_class w = 1;
      if (b == 0 && a == c) w = mpq_class(1, 2);
      if (b == a && a == c) w = mpq_class(1, 3);
      total += w;
    }
  return total;
}
}  // namespace

mpq_class kronecker_H(std::int64_t disc) { return count_forms(disc, false); }
mpq_class weighted_primitive_class_number(std::int64_t disc) { return count_forms(disc, true); }

}  // namespace modtrace
