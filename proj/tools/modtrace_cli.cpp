#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "modtrace/congruences.hpp"
#include "modtrace/curves.hpp"
#include "modtrace/drinfeld.hpp"
#include "modtrace/elltrace.hpp"
#include "modtrace/heckepoly.hpp"

#include "worked_examples.hpp"

using namespace modtrace;
using ojson = nlohmann::ordered_json;

namespace {

struct Global {
  std::string format = "human";
  unsigned threads = 1;
  std::uint64_t maxField = kDefaultMaxFieldSize;
  unsigned maxWeight = kDefaultMaxWeight;
  std::string cacheDir;
  std::uint64_t seed = 1;
};

class Emitter {
 public:
  explicit Emitter(const std::string& fmt) : fmt_(fmt) {}

  void row(const ojson& j) {
    if (fmt_ == "json") {
      std::cout << j.dump() << "\n";
      return;
    }
    if (fmt_ == "csv") {
      if (!header_) {
        std::string h;
        for (auto it = j.begin(); it != j.end(); ++it) h += (h.empty() ? "" : ",") + it.key();
        std::cout << h << "\n";
        header_ = true;
      }
      std::string line;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) line += ",";
        first = false;
        line += csv(text(it.value()));
      }
      std::cout << line << "\n";
      return;
    }
    std::string line;
    for (auto it = j.begin(); it != j.end(); ++it)
      line += (line.empty() ? "" : " ") + it.key() + "=" + text(it.value());
    std::cout << line << "\n";
  }
  void rows(const std::vector<std::string>& lines) {
    for (auto& l : lines) row(ojson::parse(l));
  }
  // human mode prints the bare value
  void value(const ojson& j, const std::string& key) {
    if (fmt_ == "human") std::cout << text(j[key]) << "\n";
    else row(j);
  }
  bool human() const { return fmt_ == "human"; }

 private:
  static std::string text(const ojson& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }
  static std::string csv(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string r = "\"";
    for (char c : s) r += c == '"' ? std::string("\"\"") : std::string(1, c);
    return r + "\"";
  }
  std::string fmt_;
  bool header_ = false;
};

FieldPtr field_of(std::uint64_t q, const Global& g) {
  auto pp = as_prime_power(q);
  if (!pp) throw Error("--q " + std::to_string(q) + " is not a prime power");
  return field(pp->p, pp->a, g.maxField);
}

std::optional<std::string> eisEven, eisOdd;

EisSpec eis_for(const LevelStructureSpec& H) {
  EisSpec e = H.N == 1 ? EisSpec::level_one() : EisSpec::unknown();
  if (eisEven) e.evenValue = mpz_class(*eisEven);
  if (eisOdd) e.oddValue = mpz_class(*eisOdd);
  return e;
}

void need_weight(std::uint64_t w, const Global& g) {
  if (w > g.maxWeight)
    throw BudgetError("weight " + std::to_string(w) + " exceeds the cap " + std::to_string(g.maxWeight) +
                      " (raise with --max-weight)");
}

void echo(const std::string& cmd, const ojson& params) {
  std::cerr << "# " << cmd << " " << params.dump() << "\n";
}

ojson fq_json(const FqField& F, FqField::Elem e) { return F.coeffs(e); }

DPeriodTable table_of(const std::string& t) {
  if (t == "stated") return DPeriodTable::Stated;
  if (t == "swapped") return DPeriodTable::ParitySwapped;
  throw Error("--table must be stated or swapped");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"traces of Frobenius and Hecke operators by weighted point counting"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  app.add_option("--format", g.format, "json | csv | human")->check(CLI::IsMember({"json", "csv", "human"}));
  app.add_option("--threads", g.threads, "enumeration partition width")->check(CLI::PositiveNumber);
  app.add_option("--max-field-size", g.maxField, "largest finite field constructed");
  app.add_option("--max-weight", g.maxWeight, "largest weight or moment order");
  app.add_option("--cache-dir", g.cacheDir, "moment cache directory");
  app.add_option("--seed", g.seed, "seed for randomized checks");

  std::uint64_t q = 0;
  std::string level = "1";
  unsigned weight = 12, kmax = 20, ell = 0, s = 1;
  std::optional<unsigned> kmin;
  auto* ell_cmd = app.add_subcommand("ell", "elliptic modular forms");
  ell_cmd->require_subcommand(1);

  auto* moments_cmd = ell_cmd->add_subcommand("moments", "trace moments [a_1^k]");
  moments_cmd->add_option("--q", q)->required();
  moments_cmd->add_option("--level", level, "1, gamma1(N), gamma0(N), full(N)");
  moments_cmd->add_option("--kmax", kmax);

  auto* trace_cmd = ell_cmd->add_subcommand("trace", "Tr(F_q | S_k(H))");
  trace_cmd->add_option("--q", q)->required();
  trace_cmd->add_option("--level", level);
  trace_cmd->add_option("--weight", weight)->required();

  auto* split_cmd = ell_cmd->add_subcommand("split", "N/U split of the trace mod ell^s");
  split_cmd->add_option("--q", q)->required();
  split_cmd->add_option("--level", level);
  split_cmd->add_option("--weight", weight)->required();
  split_cmd->add_option("--ell", ell)->required();
  split_cmd->add_option("--s", s);

  auto* vp_cmd = ell_cmd->add_subcommand("verify-period", "weight periodicity mod ell^s");
  vp_cmd->add_option("--q", q)->required();
  vp_cmd->add_option("--level", level);
  vp_cmd->add_option("--ell", ell)->required();
  vp_cmd->add_option("--s", s);
  vp_cmd->add_option("--kmin", kmin, "default k0");
  vp_cmd->add_option("--kmax", kmax)->required();
  for (auto* c : {trace_cmd, split_cmd, vp_cmd}) {
    c->add_option("--eis-even", eisEven, "Eisenstein contribution for even k (decimal)");
    c->add_option("--eis-odd", eisOdd, "Eisenstein contribution for odd k (decimal)");
  }

  std::uint32_t p = 5;
  auto* hp_cmd = ell_cmd->add_subcommand("hecke-poly", "det(1 - T_p x | S_k) at level one");
  hp_cmd->add_option("--p", p)->required();
  hp_cmd->add_option("--weight", weight)->required();

  std::int64_t disc = 0;
  auto* cn_cmd = ell_cmd->add_subcommand("class-number", "Hurwitz class number H(D)");
  cn_cmd->add_option("--disc", disc)->required();

  auto* dr_cmd = app.add_subcommand("dr", "Drinfeld modular forms");
  dr_cmd->require_subcommand(1);
  std::string Pstr = "T", ellStr = "T", table = "stated";
  unsigned n = 1;
  std::int64_t l = 1;
  auto dr_base = [&](CLI::App* c) {
    c->add_option("--q", q)->required();
    c->add_option("--P", Pstr, "monic irreducible, e.g. T^2+1")->required();
    c->add_option("--n", n);
  };
  auto* en_cmd = dr_cmd->add_subcommand("enumerate", "isomorphism classes over F_{P^n}");
  dr_base(en_cmd);
  auto* dt_cmd = dr_cmd->add_subcommand("trace", "Tr(T_P^n | S_{k,l})");
  dr_base(dt_cmd);
  dt_cmd->add_option("--weight", weight)->required();
  dt_cmd->add_option("--l", l);
  auto* dvp_cmd = dr_cmd->add_subcommand("verify-period", "weight periodicity mod ell^s");
  dr_base(dvp_cmd);
  dvp_cmd->add_option("--ell", ellStr)->required();
  dvp_cmd->add_option("--s", s);
  dvp_cmd->add_option("--l", l);
  dvp_cmd->add_option("--kmin", kmin, "default k0");
  dvp_cmd->add_option("--kmax", kmax, "default kmin + period");
  dvp_cmd->add_option("--table", table, "stated | swapped");
  auto* ram_cmd = dr_cmd->add_subcommand("ramanujan", "finite check of the Ramanujan bound");
  dr_base(ram_cmd);

  auto* st_cmd = app.add_subcommand("selftest", "bundled verification suites");
  st_cmd->require_subcommand(1);
  auto* lem_cmd = st_cmd->add_subcommand("lemmas", "coefficient and divisibility lemmas");
  unsigned randomCases = 1000;
  lem_cmd->add_option("--cases", randomCases, "random instances per randomized lemma");
  auto* pe_cmd = st_cmd->add_subcommand("paper-examples", "worked examples with published values");

  CLI11_PARSE(app, argc, argv);
  Emitter out(g.format);
  EnumOptions opt{g.threads, g.maxField};

  try {
    if (*moments_cmd) {
      need_weight(kmax, g);
      auto F = field_of(q, g);
      auto H = LevelStructureSpec::by_name(level);
      echo("ell moments", {{"q", q}, {"level", level}, {"kmax", kmax}, {"cache_dir", g.cacheDir}});
      auto M = moments(F, H, kmax, g.cacheDir, opt, g.maxWeight);
      for (unsigned k = 0; k <= kmax; ++k)
        out.row({{"q", q}, {"level", level}, {"k", k}, {"moment", M.moments[k].get_str()}});
      return 0;
    }
    if (*trace_cmd) {
      if (weight < 2) throw Error("--weight must be at least 2");
      need_weight(weight, g);
      auto F = field_of(q, g);
      auto H = LevelStructureSpec::by_name(level);
      echo("ell trace", {{"q", q}, {"level", level}, {"weight", weight}});
      auto T = trace(distribution(F, H, opt), weight - 2, eis_for(H));
      ojson j{{"q", q}, {"level", level}, {"weight", weight}};
      j["interior"] = T.interior.get_str();
      if (T.value) {
        j["value"] = T.value->get_str();
        out.value(j, "value");
      } else {
        j["value"] = nullptr;
        if (out.human()) std::cerr << "# Eisenstein correction unknown for this level; value is Tr + eps + eis\n";
        out.value(j, "interior");
      }
      return 0;
    }
    if (*split_cmd) {
      if (weight < 2) throw Error("--weight must be at least 2");
      need_weight(weight, g);
      auto F = field_of(q, g);
      auto H = LevelStructureSpec::by_name(level);
      echo("ell split", {{"q", q}, {"level", level}, {"weight", weight}, {"ell", ell}, {"s", s}});
      auto R = split_trace(distribution(F, H, opt), weight - 2, ell, s, eis_for(H));
      ojson j{{"q", q}, {"level", level}, {"weight", weight}, {"ell", ell}, {"s", s},
              {"modulus", R.modulus.get_str()}, {"N", R.N.get_str()}, {"U", R.U.get_str()},
              {"N_mod", R.Nmod.get_str()}, {"U_mod", R.Umod.get_str()}};
      j["reassembled"] = R.reassembled ? ojson(R.reassembled->get_str()) : ojson(nullptr);
      out.row(j);
      return 0;
    }
    if (*vp_cmd) {
      auto F = field_of(q, g);
      auto H = LevelStructureSpec::by_name(level);
      auto D = distribution(F, H, opt);
      auto spec = period_for(ell, s, q, level_flags(D, ell));
      std::uint64_t lo = kmin ? *kmin : spec.k0;
      need_weight(kmax + spec.n + 2, g);
      echo("ell verify-period", {{"q", q}, {"level", level}, {"ell", ell}, {"s", s}, {"kmin", lo}, {"kmax", kmax}});
      auto R = verify_periodicity(D, ell, s, lo, kmax, eis_for(H));
      if (!out.human()) out.rows(R.json_lines());
      ojson sum{{"ell", ell}, {"s", s}, {"q", q}, {"level", level}, {"case", to_string(R.spec.caseTag)},
                {"period", R.spec.n}, {"k0", R.spec.k0}, {"checked", R.checks.size()},
                {"comparison", R.comparison}, {"pass", R.allPass()}};
      if (R.firstFailure) sum["first_failure_k"] = R.firstFailure->k;
      if (out.human()) out.row(sum);
      else std::cerr << "# " << sum.dump() << "\n";
      return R.allPass() ? 0 : 1;
    }
    if (*hp_cmd) {
      echo("ell hecke-poly", {{"p", p}, {"weight", weight}});
      need_weight(weight, g);
      auto f = charpoly_Tp(p, weight, opt);
      ojson coeffs = ojson::array();
      for (auto& c : f.poly) coeffs.push_back(c.get_str());
      ojson j{{"p", p}, {"weight", weight}, {"dim", f.dim}, {"poly", coeffs}, {"slope0", slope0_mult(f)}};
      out.row(j);
      return 0;
    }
    if (*cn_cmd) {
      echo("ell class-number", {{"disc", disc}});
      out.value({{"disc", disc}, {"H", kronecker_H(disc).get_str()}}, "H");
      return 0;
    }

    auto dparams = [&] {
      auto pp = as_prime_power(q);
      if (!pp) throw Error("--q " + std::to_string(q) + " is not a prime power");
      return DrinfeldParams::make(q, Pstr, n, g.maxField);
    };
    if (*en_cmd) {
      echo("dr enumerate", {{"q", q}, {"P", Pstr}, {"n", n}});
      auto P = dparams();
      for (auto& c : enumerate_classes(P, g.threads))
        out.row({{"g", fq_json(*P.L, c.g)}, {"delta", fq_json(*P.L, c.delta)}, {"autOrder", c.autOrder},
                 {"orbitSize", c.orbitSize}, {"a", c.frobA.coeff_arrays()}, {"b", fq_json(*P.Fq, c.frobB)}});
      return 0;
    }
    if (*dt_cmd) {
      if (weight < 2) throw Error("--weight must be at least 2");
      need_weight(weight, g);
      echo("dr trace", {{"q", q}, {"P", Pstr}, {"n", n}, {"weight", weight}, {"l", l}});
      auto P = dparams();
      FqPoly t = trace_Tpn(P, enumerate_classes(P, g.threads), weight - 2, l);
      ojson j{{"q", q}, {"P", P.P.str()}, {"n", n}, {"weight", weight}, {"l", l}, {"trace", t.coeff_arrays()}};
      if (out.human()) std::cout << t.str() << "\n";
      else out.row(j);
      return 0;
    }
    if (*dvp_cmd) {
      auto P = dparams();
      FqPoly L = FqPoly::parse(P.Fq, ellStr);
      auto spec = dperiod_for(P, L, s, table_of(table));
      unsigned lo = kmin ? *kmin : spec.k0;
      unsigned hi = dvp_cmd->count("--kmax") ? kmax : static_cast<unsigned>(lo + spec.period);
      need_weight(hi + spec.period + 2, g);
      echo("dr verify-period", {{"q", q}, {"P", Pstr}, {"n", n}, {"ell", ellStr}, {"s", s}, {"l", l},
                                {"kmin", lo}, {"kmax", hi}, {"table", table}});
      auto R = verify_period_ff(P, enumerate_classes(P, g.threads), L, s, l, lo, hi, table_of(table));
      if (!out.human()) out.rows(R.json_lines(P));
      ojson sum{{"q", q}, {"P", P.P.str()}, {"n", n}, {"ell", L.str()}, {"s", s}, {"l", l},
                {"case", case_name(R.spec.caseTag)}, {"period", R.spec.period}, {"k0", R.spec.k0},
                {"checked", R.checks.size()}, {"pass", R.allPass()}};
      for (auto& c : R.checks)
        if (!c.pass || !c.splitOk) {
          sum["first_failure_k"] = c.k;
          break;
        }
      if (out.human()) out.row(sum);
      else std::cerr << "# " << sum.dump() << "\n";
      return R.allPass() ? 0 : 1;
    }
    if (*ram_cmd) {
      echo("dr ramanujan", {{"q", q}, {"P", Pstr}, {"n", n}});
      auto P = dparams();
      auto R = ramanujan_check(P, enumerate_classes(P, g.threads));
      out.rows(R.json_lines(P));
      if (!R.vacuous)
        std::cerr << "# s=" << R.s << " s~=" << R.sTilde << " k<" << R.kEnd << " rows=" << R.rows.size()
                  << (R.allPass() ? " all pass" : " FAIL") << "\n";
      return R.allPass() ? 0 : 1;
    }
    if (*lem_cmd) {
      echo("selftest lemmas", {{"seed", g.seed}, {"cases", randomCases}});
      bool ok = true;
      for (auto& t : lemma_suite(g.seed, randomCases)) {
        ojson j{{"lemma", t.name}, {"cases", t.cases}, {"failures", t.failures}, {"pass", t.failures == 0}};
        if (t.failures) j["first_failure"] = t.firstFailure;
        ok = ok && t.failures == 0;
        out.row(j);
      }
      return ok ? 0 : 1;
    }
    if (*pe_cmd) {
      echo("selftest paper-examples", ojson::object());
      for (auto& ex : worked_examples()) {
        std::string got;
        bool ok = false;
        try {
          got = ex.run(opt);
          ok = got == ex.expected;
        } catch (const std::exception& e) {
          got = std::string("error: ") + e.what();
        }
        out.row({{"example", ex.name}, {"expected", ex.expected}, {"got", got}, {"pass", ok}});
        if (!ok) {
          std::cerr << "MISMATCH in " << ex.name << ": expected " << ex.expected << ", got " << got << "\n";
          return 1;
        }
      }
      return 0;
    }
  } catch (const BudgetError& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
