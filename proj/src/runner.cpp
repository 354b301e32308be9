#include "cpb/runner.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "cpb/constructors.hpp"
#include "cpb/corpus.hpp"
#include "cpb/errors.hpp"
#include "cpb/inverse_series.hpp"
#include "cpb/maps.hpp"
#include "cpb/monoid.hpp"
#include "cpb/skew.hpp"

namespace cpb {

std::string tool_version() { return CPBAER_VERSION; }

namespace {

struct SuiteInfo {
  std::string name;
  std::vector<std::string> aliases;
  std::string description;
};

const std::vector<SuiteInfo>& suites() {
  static const std::vector<SuiteInfo> table = {
      {"classify", {}, "classify the ring and check the flag implications"},
      {"cp-equivalences", {"prop14"}, "four characterizations of right cP-Baer agree"},
      {"poly-transfer", {"thm12-poly"}, "idempotents and annihilators of R[x; alpha]"},
      {"series-transfer", {"thm12-series"}, "idempotents and annihilators of R[[x; alpha]] truncated at N"},
      {"two-variable", {"thm38-multivar"}, "idempotents and annihilators over two commuting indeterminates"},
      {"laurent", {}, "Jordan normalization and idempotents of the skew Laurent window"},
      {"spa", {}, "products of truncated polynomials vanish iff coefficient products do"},
      {"monoid-transfer", {"monoid-t1"}, "idempotents and annihilators of the monoid ring R[M]"},
      {"inverse-transfer", {"inverse-thm24"}, "idempotents and annihilators of R[[x^-1; alpha, delta]]"},
      {"prime-transfer", {"prop241"}, "prime and semiprime transfer to the extensions"},
      {"shift-example", {"example13"}, "the shift on eventually constant sequences is not compatible"},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& s : suites()) v.push_back(s.name);
    return v;
  }();
  return names;
}

std::optional<std::string> canonical_suite(const std::string& name) {
  for (const auto& s : suites()) {
    if (s.name == name) return s.name;
    if (std::find(s.aliases.begin(), s.aliases.end(), name) != s.aliases.end()) return s.name;
  }
  return std::nullopt;
}

std::string suite_description(const std::string& suite) {
  for (const auto& s : suites())
    if (s.name == suite) return s.description;
  return {};
}

std::map<std::string, std::int64_t> suite_bounds(const std::string& suite, const RunOptions& o) {
  auto n_or = [&](unsigned d) { return static_cast<std::int64_t>(o.bound_n.value_or(d)); };
  auto d_or = [&](unsigned d) { return static_cast<std::int64_t>(o.bound_d.value_or(d)); };
  std::map<std::string, std::int64_t> b;
  auto brute = static_cast<std::int64_t>(o.brute_limit);
  if (suite == "shift-example") return {{"window", 2}};
  b["cap"] = static_cast<std::int64_t>(o.order_cap);
  if (suite == "poly-transfer" || suite == "series-transfer") {
    b["N"] = n_or(4);
    b["D"] = d_or(6);
    b["B"] = brute;
  } else if (suite == "two-variable") {
    b["N1"] = n_or(2);
    b["N2"] = n_or(2);
  } else if (suite == "laurent") {
    b["W"] = static_cast<std::int64_t>(o.window.value_or(3));
  } else if (suite == "spa") {
    b["N"] = n_or(2);
    b["seed"] = static_cast<std::int64_t>(o.seed);
  } else if (suite == "monoid-transfer") {
    b["B"] = brute;
  } else if (suite == "inverse-transfer") {
    b["N"] = n_or(3);
    b["D"] = d_or(6);
    b["B"] = brute;
    b["orbit"] = 64;
  } else if (suite == "prime-transfer") {
    b["N"] = n_or(4);
    b["N_inverse"] = std::min<std::int64_t>(n_or(4), 2);
  }
  return b;
}

// ---------------------------------------------------------------------------
// Cache

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

ReportCache::ReportCache(std::string directory) : dir_(std::move(directory)) {}

std::optional<ReportCache> ReportCache::from_options(const RunOptions& options) {
  if (options.cache_dir && !options.cache_dir->empty()) return ReportCache(*options.cache_dir);
  if (const char* env = std::getenv("CPBAER_CACHE_DIR"); env && *env) return ReportCache(env);
  return std::nullopt;
}

std::string ReportCache::key(const std::string& spec, const std::string& suite,
                             const std::map<std::string, std::int64_t>& bounds) {
  std::string k = tool_version() + "\n" + spec + "\n" + suite + "\n";
  for (const auto& [name, v] : bounds) k += fmt::format("{}={};", name, v);
  return k;
}

std::string ReportCache::path_for(const std::string& key) const {
  return (std::filesystem::path(dir_) / fmt::format("{:016x}.json", fnv1a64(key))).string();
}

std::optional<RunReport> ReportCache::load(const std::string& k) const {
  std::ifstream in(path_for(k), std::ios::binary);
  if (!in) return std::nullopt;
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    RunReport r = report_from_json(ss.str());
    // Guard against hash collisions: the key fields are part of the report.
    if (key(r.spec, r.suite, r.bounds) != k || r.version != tool_version()) return std::nullopt;
    return r;
  } catch (const ReportParseError&) {
    return std::nullopt;
  }
}

void ReportCache::store(const std::string& key, const RunReport& report) const {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir_, ec);
  static std::atomic<unsigned> counter{0};
  fs::path final_path = path_for(key);
  fs::path tmp = final_path;
  tmp += fmt::format(".tmp.{}.{}", static_cast<long>(::getpid()), counter++);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) return;  // an unwritable cache only costs time
    out << report_to_json(report);
    if (!out) {
      fs::remove(tmp, ec);
      return;
    }
  }
  fs::rename(tmp, final_path, ec);
  if (ec) fs::remove(tmp, ec);
}

// ---------------------------------------------------------------------------
// Suites

namespace {

CheckResult check(std::string name, bool ok, std::string scope = {}) {
  CheckResult c;
  c.name = std::move(name);
  c.outcome = ok ? Outcome::kPass : Outcome::kFail;
  c.scope = std::move(scope);
  return c;
}

CheckResult skipped(std::string name, std::string note) {
  CheckResult c;
  c.name = std::move(name);
  c.outcome = Outcome::kSkipped;
  c.note = std::move(note);
  return c;
}

std::string pair_text(const FiniteRing& r, std::pair<Elem, Elem> w) {
  return fmt::format("a = {}, b = {}", r.label(w.first), r.label(w.second));
}

struct Suite {
  const RunOptions& opt;
  const std::map<std::string, std::int64_t>& bounds;
  const BuiltSpec& built;
  RunReport& rep;

  const FiniteRing& ring() const { return *built.ring; }
  unsigned bound(const char* k) const { return static_cast<unsigned>(bounds.at(k)); }
  void add(CheckResult c) { rep.checks.push_back(std::move(c)); }
  void inapplicable(CheckResult c) {
    add(std::move(c));
    rep.status = "inapplicable";
  }

  // Adds the compatibility hypothesis check; false if it fails.
  bool require_alpha_compatible(const RingMorphism& alpha) {
    auto w = alpha_compatibility_witness(alpha);
    CheckResult c = w ? skipped("alpha-compatible", "hypothesis fails; the remaining checks do not apply")
                      : check("alpha-compatible", true, "exhaustive");
    if (w) c.counterexample = pair_text(ring(), *w) + " with exactly one of a*b, a*alpha(b) zero";
    if (w) {
      inapplicable(std::move(c));
      return false;
    }
    add(std::move(c));
    return true;
  }

  bool require_automorphism(const RingMorphism& alpha) {
    if (alpha.is_automorphism()) return true;
    inapplicable(skipped("alpha bijective", "alpha is not an automorphism; the suite needs alpha^-1"));
    return false;
  }

  bool require_delta_compatible(const AlphaDerivation& delta) {
    auto w = delta_compatibility_witness(delta);
    if (!w) {
      add(check("delta-compatible", true, "exhaustive"));
      return true;
    }
    CheckResult c = skipped("delta-compatible", "hypothesis fails; the remaining checks do not apply");
    c.counterexample = pair_text(ring(), *w) + " with a*b = 0 and a*delta(b) != 0";
    inapplicable(std::move(c));
    return false;
  }

  void classify_suite() {
    ClassifyOptions co;
    co.order_cap = opt.order_cap;
    PropertyReport p = classify(ring(), co);
    auto axioms = validate_axioms(ring());
    CheckResult ax = check("ring axioms", axioms.empty(), "exhaustive");
    if (!axioms.empty()) ax.counterexample = axioms.front().describe();
    add(std::move(ax));
    auto violations = report_invariant_violations(p);
    CheckResult inv = check("flag implications", violations.empty());
    for (const auto& v : violations) inv.counterexample += (inv.counterexample.empty() ? "" : "; ") + v;
    inv.metrics["flags"] = static_cast<std::int64_t>(p.flags.size());
    add(std::move(inv));
    if (p.partial) rep.status = "partial";
    rep.properties.push_back(std::move(p));
  }

  void equivalence_suite() {
    CpBaerResult cp = right_cp_baer(ring());
    CpEquivalence eq = cp_baer_equivalences(ring());
    Verdict expected = cp.holds ? Verdict::kTrue : Verdict::kFalse;
    bool ok = eq.agree;
    std::string items;
    for (std::size_t i = 0; i < eq.items.size(); ++i) {
      items += fmt::format("{}({}) {}", i ? ", " : "", i + 1, to_string(eq.items[i]));
      if (eq.items[i] != Verdict::kSkipped && eq.items[i] != expected) ok = false;
    }
    CheckResult c = check("cP-Baer characterizations agree", ok, "exhaustive");
    c.metrics["right_cp_baer"] = cp.holds;
    c.metrics["idempotents"] = static_cast<std::int64_t>(idempotents(ring()).size());
    c.note = "items " + items;
    c.counterexample = eq.diagnostic;
    add(std::move(c));
  }

  void skew_transfer_suite(SeriesKind kind) {
    RingMorphism alpha = built.alpha_or_identity();
    if (!require_alpha_compatible(alpha)) return;
    const unsigned n = bound("N"), d = bound("D");
    auto ctx = make_skew_context(alpha, kind, n);
    IdempotentEnumeration en = enumerate_idempotents(ctx);
    const std::string degree_scope = fmt::format("verified to degree {}", d);

    {
      std::size_t nonconstant = 0;
      bool closed = true;
      std::string missing;
      SkewSeries one = SkewSeries::constant(ctx, ring().one());
      for (const auto& e : en.items) {
        if (!e.is_constant()) ++nonconstant;
        SkewSeries comp = skew_add(one, skew_neg(e));
        if (std::find(en.items.begin(), en.items.end(), comp) == en.items.end() && closed) {
          closed = false;
          missing = "1 - e missing for e = " + e.describe();
        }
      }
      CheckResult c = check("idempotents closed under complement", closed || en.truncated,
                            fmt::format("all idempotents with degree <= {}", n));
      c.metrics = {{"idempotents", static_cast<std::int64_t>(en.items.size())},
                   {"nonconstant", static_cast<std::int64_t>(nonconstant)},
                   {"rejected", static_cast<std::int64_t>(en.rejected)},
                   {"truncated", en.truncated}};
      c.counterexample = missing;
      if (en.truncated) {
        c.outcome = Outcome::kSkipped;
        c.note = "enumeration stopped at its cap";
        rep.status = "partial";
      }
      add(std::move(c));
    }

    {
      CheckResult c = check("coefficients lie in R e0 R", true, fmt::format("all idempotents with degree <= {}", n));
      for (const auto& e : en.items) {
        if (!coefficients_in_ideal_of_constant(e)) {
          c.outcome = Outcome::kFail;
          c.counterexample = e.describe();
          break;
        }
      }
      add(std::move(c));
    }

    {
      CheckResult c = check("left semicentral structure", true, fmt::format("semicentrality tested to degree {}", n));
      std::int64_t count = 0;
      for (const auto& e : en.items) {
        if (!is_left_semicentral_bounded(e)) continue;
        ++count;
        if (!semicentral_structure(e).all() && c.outcome == Outcome::kPass) {
          c.outcome = Outcome::kFail;
          c.counterexample = e.describe();
        }
      }
      c.metrics["left_semicentral"] = count;
      add(std::move(c));
    }

    CpBaerResult cp = right_cp_baer(ring());
    if (!cp.holds) {
      std::string why = fmt::format("base is not right cP-Baer (no witness for e = {})", ring().label(*cp.failing));
      add(skipped("annihilator generated by an idempotent", why));
      add(skipped("extension witness restricts to the base", why));
      return;
    }
    {
      CheckResult c = check("annihilator generated by an idempotent", true, degree_scope);
      c.bounds = {{"D", d}, {"B", static_cast<std::int64_t>(opt.brute_limit)}};
      std::int64_t brute = 0;
      for (const auto& e : en.items) {
        Elem w = annihilator_generator(e, cp);
        AnnihilatorCheck a = verify_annihilator_bounded(e, w, d, opt.brute_limit);
        brute += static_cast<std::int64_t>(a.brute_checked);
        if (!a.passed() && c.outcome == Outcome::kPass) {
          c.outcome = Outcome::kFail;
          c.counterexample = fmt::format("e = {}, c = {}: {}", e.describe(), ring().label(w), a.counterexample);
        }
      }
      c.metrics["brute_checked"] = brute;
      add(std::move(c));
    }
    {
      CheckResult c = check("extension witness restricts to the base", true, degree_scope);
      std::int64_t candidates = 0;
      for (Elem e0 : idempotents(ring()).members()) {
        ConverseCheck cc = converse_restriction(en, e0, d);
        candidates += static_cast<std::int64_t>(cc.candidates);
        if (!cc.ok && c.outcome == Outcome::kPass) {
          c.outcome = Outcome::kFail;
          c.counterexample = fmt::format("e0 = {}: {}", ring().label(e0), cc.detail);
        }
      }
      c.metrics["candidates"] = candidates;
      add(std::move(c));
    }
  }

  void two_variable_suite() {
    if (built.alpha && !built.alpha->is_identity()) {
      inapplicable(skipped("alpha is the identity", "the two-variable suite uses plain coefficients"));
      return;
    }
    const unsigned n1 = bound("N1"), n2 = bound("N2");
    MultivarSuiteResult m = multivar_suite(built.ring, n1, n2);
    const std::string scope = fmt::format("truncated at x1^{} x2^{}", n1 + 1, n2 + 1);
    CheckResult en = check("idempotent enumeration", !m.truncated, scope);
    en.metrics = {{"idempotents", static_cast<std::int64_t>(m.idempotents)},
                  {"nonconstant", static_cast<std::int64_t>(m.nonconstant)},
                  {"left_semicentral", static_cast<std::int64_t>(m.left_semicentral)}};
    if (m.truncated) {
      en.outcome = Outcome::kSkipped;
      en.note = "enumeration stopped at its cap";
      rep.status = "partial";
    }
    add(std::move(en));
    CheckResult mem = check("coefficients lie in R e0 R", m.membership_ok, scope);
    CheckResult st = check("left semicentral structure", m.structure_ok, scope);
    if (!m.membership_ok) mem.counterexample = m.counterexample;
    else if (!m.structure_ok) st.counterexample = m.counterexample;
    add(std::move(mem));
    add(std::move(st));
    if (!m.annihilator_ok) {
      add(skipped("annihilator generated by an idempotent", "base is not right cP-Baer"));
    } else {
      CheckResult a = check("annihilator generated by an idempotent", *m.annihilator_ok, scope);
      if (!*m.annihilator_ok) a.counterexample = m.counterexample;
      add(std::move(a));
    }
  }

  void laurent_suite() {
    RingMorphism alpha = built.alpha_or_identity();
    if (!require_automorphism(alpha)) return;
    const unsigned w = bound("W");
    LaurentSuiteResult l = laurent_window_suite(alpha, w);
    const std::string scope = fmt::format("exponents -{} .. {}", w, w);
    add(check("Jordan pairs normalize", l.normalization_ok, scope));
    CheckResult se = check("semicentral idempotents agree with the base", l.semicentral_equivalence_ok, scope);
    if (!l.semicentral_equivalence_ok) se.counterexample = l.counterexample;
    add(std::move(se));
    if (!l.idempotents_constant) {
      add(skipped("idempotents are constant", "base is not semicommutative and alpha-compatible"));
    } else {
      CheckResult c = check("idempotents are constant", *l.idempotents_constant, scope);
      c.metrics = {{"idempotents", static_cast<std::int64_t>(l.laurent_idempotents)},
                   {"truncated", l.search_truncated}};
      if (!*l.idempotents_constant) c.counterexample = l.counterexample;
      if (l.search_truncated) {
        c.note = "search stopped at its node cap";
        rep.status = "partial";
      }
      add(std::move(c));
    }
  }

  void spa_suite() {
    RingMorphism alpha = built.alpha_or_identity();
    const unsigned n = bound("N");
    SpaCheck s = spa_bounded_check(alpha, n, opt.seed);
    bool rigid = is_rigid(alpha);
    CheckResult c = check("rigid base has the product property", s.holds || !rigid,
                          s.sampled ? fmt::format("sampled pairs of degree <= {}", n)
                                    : fmt::format("exhaustive over degree <= {}", n));
    c.metrics = {{"holds", s.holds}, {"rigid", rigid}, {"pairs", static_cast<std::int64_t>(s.pairs)},
                 {"sampled", s.sampled}};
    if (s.witness) {
      ExactSeries f = s.witness->first, g = s.witness->second;
      auto text = [&](const ExactSeries& p) {
        std::string out;
        for (std::size_t k = 0; k < p.coeffs.size(); ++k) out += (k ? " " : "") + ring().label(p.coeffs[k]);
        return "[" + out + "]";
      };
      c.counterexample = fmt::format("f = {}, g = {}", text(f), text(g));
      c.note = "the product property fails for this base";
    }
    add(std::move(c));
  }

  void monoid_suite() {
    const MonoidContext& ctx = *built.monoid;
    MonoidSuiteResult m = monoid_t1_suite(ctx, opt.brute_limit);
    const std::string scope = fmt::format("support of {} elements", m.support_size);
    CheckResult l1 = check("products dominate their factors", m.l1_ok, "all pairs in the support");
    l1.note = "monoid " + m.monoid;
    add(std::move(l1));
    CheckResult l2 = check("least term is an idempotent at the identity", m.l2_l3_ok, scope);
    l2.metrics = {{"support", static_cast<std::int64_t>(m.support_size)},
                  {"idempotents", static_cast<std::int64_t>(m.idempotents)},
                  {"nonconstant", static_cast<std::int64_t>(m.nonconstant)},
                  {"escaped", static_cast<std::int64_t>(m.escaped)},
                  {"truncated", m.truncated}};
    if (m.escaped) l2.note = "candidates whose square leaves the support were skipped";
    if (!m.l2_l3_ok) l2.counterexample = m.counterexample;
    if (m.truncated) rep.status = "partial";
    add(std::move(l2));
    if (!m.annihilator_ok) {
      add(skipped("annihilator generated by an idempotent", "base is not right cP-Baer"));
    } else {
      CheckResult a = check("annihilator generated by an idempotent", *m.annihilator_ok, scope);
      if (!*m.annihilator_ok) a.counterexample = m.counterexample;
      add(std::move(a));
    }
  }

  void inverse_suite() {
    AlphaDerivation delta = built.delta_or_zero();
    if (!require_automorphism(delta.alpha())) return;
    if (!require_alpha_compatible(delta.alpha())) return;
    if (!require_delta_compatible(delta)) return;
    const unsigned n = bound("N"), d = bound("D");
    const unsigned orbit = bound("orbit");
    const FiniteRing& r = ring();

    {
      CheckResult c = check("annihilators stable under alpha, alpha^-1, delta", true,
                            fmt::format("words of length <= {}", orbit));
      std::int64_t pairs = 0;
      auto gens = r.additive_generators();
      for (Elem e : idempotents(r).members())
        for (std::size_t a = 0; a < r.order(); ++a) {
          bool killed = std::all_of(gens.begin(), gens.end(),
                                    [&](Elem g) { return r.mul(r.mul(e, g), static_cast<Elem>(a)) == r.zero(); });
          if (!killed) continue;
          ++pairs;
          OrbitCheck oc = operator_orbit_annihilation(delta, e, static_cast<Elem>(a), orbit);
          if (!oc.holds && c.outcome == Outcome::kPass) {
            c.outcome = Outcome::kFail;
            c.counterexample = fmt::format("e = {}, a = {}, image {}", r.label(e), r.label(static_cast<Elem>(a)),
                                           r.label(oc.failing.value_or(0)));
          }
        }
      c.metrics["pairs"] = pairs;
      add(std::move(c));
    }
    {
      auto ctx = make_inverse_context(delta, n);
      CheckResult c = check("left semicentral idempotents stay left semicentral", true,
                            fmt::format("monomials of degree <= {}", n));
      auto sl = semicentral_idempotents(r, Side::kLeft).members();
      for (Elem e : sl) {
        if (!semicentral_stability(ctx, e) && c.outcome == Outcome::kPass) {
          c.outcome = Outcome::kFail;
          c.counterexample = "c = " + r.label(e);
        }
      }
      c.metrics["left_semicentral"] = static_cast<std::int64_t>(sl.size());
      add(std::move(c));
    }

    Thm24Result t = thm24_verify(delta, n, d, opt.brute_limit);
    const std::string scope = fmt::format("idempotents mod x^-{}", n + 1);
    CheckResult en = check("idempotent enumeration", !t.truncated, scope);
    en.metrics = {{"idempotents", static_cast<std::int64_t>(t.idempotents)},
                  {"left_semicentral", static_cast<std::int64_t>(t.left_semicentral)}};
    if (t.truncated) {
      en.outcome = Outcome::kSkipped;
      en.note = "enumeration stopped at its cap";
      rep.status = "partial";
    }
    add(std::move(en));
    CheckResult mem = check("coefficients lie in R e0 R", t.membership_ok, scope);
    CheckResult st = check("left semicentral structure", t.structure_ok, scope);
    if (!t.membership_ok) mem.counterexample = t.counterexample;
    else if (!t.structure_ok) st.counterexample = t.counterexample;
    add(std::move(mem));
    add(std::move(st));
    if (!t.annihilator_ok) {
      add(skipped("annihilator generated by an idempotent", "base is not right cP-Baer"));
    } else {
      CheckResult a = check("annihilator generated by an idempotent", *t.annihilator_ok,
                            fmt::format("verified to degree {}", d));
      a.metrics["brute_checked"] = static_cast<std::int64_t>(t.brute_checked);
      if (!*t.annihilator_ok) a.counterexample = t.counterexample;
      add(std::move(a));
    }
  }

  void prime_suite() {
    AlphaDerivation delta = built.delta_or_zero();
    const RingMorphism& alpha = delta.alpha();
    if (!require_alpha_compatible(alpha)) return;
    const unsigned n = bound("N");
    const bool semiprime = is_semiprime(ring());

    {
      NilpotentWitnessSearch w = nilpotent_witness_search(alpha, n);
      // Compatible semiprime bases give semiprime R[x; alpha]; a found witness
      // is a defect. A non-semiprime base always has a constant witness.
      bool ok = semiprime ? !w.found : w.found;
      std::string scope = w.exhaustive ? fmt::format("exhaustive over degree <= {}", n)
                                       : fmt::format("one- and two-term candidates of degree <= {}", n);
      CheckResult c = check("R[x; alpha] semiprime iff the base is", ok, scope);
      c.metrics = {{"base_semiprime", semiprime}, {"witness_found", w.found},
                   {"checked", static_cast<std::int64_t>(w.checked)}};
      if (w.found) {
        std::string coeffs;
        for (std::size_t k = 0; k < w.witness.coeffs.size(); ++k)
          coeffs += (k ? " " : "") + ring().label(w.witness.coeffs[k]);
        c.counterexample = fmt::format("f = [{}] from x^{}", coeffs, w.witness.low);
      }
      if (semiprime) c.note = "no witness up to the bound; semiprimeness of R[x; alpha] is only checked to that degree";
      add(std::move(c));
    }

    if (!alpha.is_automorphism()) {
      add(skipped("prime and semiprime transfer to R[[x^-1; alpha, delta]]", "alpha is not an automorphism"));
      return;
    }
    if (!is_delta_compatible(delta)) {
      add(skipped("prime and semiprime transfer to R[[x^-1; alpha, delta]]", "delta is not compatible"));
      return;
    }
    const unsigned ni = bound("N_inverse");
    PrimeTransfer p = prime_transfer_bounded(delta, ni);
    CheckResult c = check("prime and semiprime transfer to R[[x^-1; alpha, delta]]", p.passed(),
                          fmt::format("{} over polynomials in x^-1 of degree <= {}",
                                      p.exhaustive ? "exhaustive" : "sampled", ni));
    c.metrics = {{"base_prime", p.base_prime}, {"base_semiprime", p.base_semiprime},
                 {"checked", static_cast<std::int64_t>(p.checked)}};
    c.counterexample = p.counterexample;
    add(std::move(c));
  }

  void shift_suite() {
    ShiftRing s(built.ring);
    // a has 1 in position 1, b has 1 in position 0.
    const Elem one = built.ring->one();
    ShiftRing::Element a = s.unit_vector(1, one), b = s.unit_vector(0, one);
    ShiftRing::Element ab = s.mul(a, b), a_ab = s.mul(a, s.alpha(b)), b_aa = s.mul(b, s.alpha(a));
    bool ok = s.is_zero(ab) && !s.is_zero(b) && b_aa == b;
    CheckResult c = check("displayed products", ok, "exact");
    c.note = fmt::format(
        "a = {}, b = {}, alpha(a) = {}, alpha(b) = {}: a*b = {}, a*alpha(b) = {}, b*alpha(a) = {}. "
        "The nonzero product equal to b is b*alpha(a); with the shift as defined a*alpha(b) = 0, "
        "so the displayed a*alpha(b) = b holds with a and b exchanged",
        s.describe(a), s.describe(b), s.describe(s.alpha(a)), s.describe(s.alpha(b)), s.describe(ab),
        s.describe(a_ab), s.describe(b_aa));
    c.metrics = {{"ab_zero", s.is_zero(ab)}, {"a_alpha_b_zero", s.is_zero(a_ab)}, {"b_alpha_a_equals_b", b_aa == b}};
    add(std::move(c));

    std::vector<ShiftRing::Element> sample{s.zero(), s.one()};
    for (long i = -2; i <= 2; ++i) sample.push_back(s.unit_vector(i, one));
    auto w = compatibility_witness_on<ShiftRing::Element>(
        sample, [&](const auto& x, const auto& y) { return s.mul(x, y); }, [&](const auto& x) { return s.is_zero(x); },
        [&](const auto& x) { return s.alpha(x); });
    CheckResult cw = check("not alpha-compatible", w.has_value(), "sample of unit vectors at positions -2 .. 2");
    if (w) {
      cw.counterexample = fmt::format("x = {}, y = {}: x*y = {}, x*alpha(y) = {}", s.describe(w->first),
                                      s.describe(w->second), s.describe(s.mul(w->first, w->second)),
                                      s.describe(s.mul(w->first, s.alpha(w->second))));
    }
    add(std::move(cw));
    add(skipped("R[x; alpha] is not right cP-Baer",
                "quantifies over idempotents of an infinite ring; not machine-checked"));
  }
};

RingSpec parse_for_suite(const std::string& suite, const std::string& text) {
  bool blank = std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); });
  if (blank && suite == "shift-example") return parse_spec("zmod 2");
  return parse_spec(text);
}

}  // namespace

RunReport run_suite(const std::string& suite, const std::string& spec_text, const RunOptions& options) {
  auto canonical = canonical_suite(suite);
  if (!canonical) throw InputError("unknown suite '" + suite + "'");
  return run_suite(*canonical, parse_for_suite(*canonical, spec_text), options);
}

RunReport run_suite(const std::string& suite_name, const RingSpec& input, const RunOptions& options) {
  auto started = std::chrono::steady_clock::now();
  auto canonical = canonical_suite(suite_name);
  if (!canonical) throw InputError("unknown suite '" + suite_name + "'");
  const std::string& suite = *canonical;

  RingSpec spec = input;
  if (suite == "monoid-transfer" && !spec.monoid) {
    MonoidExpr m;
    m.rank = 2;
    m.order = MonoidOrder::kLex;
    m.box = {2, 2};
    spec.monoid = m;
  }

  RunReport rep;
  rep.version = tool_version();
  rep.command = suite == "classify" ? "classify" : "verify";
  rep.suite = suite;
  rep.spec = serialize(spec);
  rep.bounds = suite_bounds(suite, options);

  auto finish = [&](RunReport r) {
    if (options.timing) {
      r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    }
    return r;
  };

  // Test hook: CPBAER_FAULT=<check name> turns that check into a failure so
  // the exit-code path for a broken contract can be exercised end to end.
  // Faulted runs never touch the cache.
  const char* fault = std::getenv("CPBAER_FAULT");
  const bool faulted = fault && *fault;
  auto cache = faulted ? std::nullopt : ReportCache::from_options(options);
  const std::string key = ReportCache::key(rep.spec, rep.suite, rep.bounds);
  if (cache) {
    if (auto hit = cache->load(key)) return finish(*hit);
  }

  try {
    BuiltSpec built = build_spec(spec, options.order_cap);
    Suite s{options, rep.bounds, built, rep};
    if (suite == "classify") s.classify_suite();
    else if (suite == "cp-equivalences") s.equivalence_suite();
    else if (suite == "poly-transfer") s.skew_transfer_suite(SeriesKind::kPolynomial);
    else if (suite == "series-transfer") s.skew_transfer_suite(SeriesKind::kPowerSeries);
    else if (suite == "two-variable") s.two_variable_suite();
    else if (suite == "laurent") s.laurent_suite();
    else if (suite == "spa") s.spa_suite();
    else if (suite == "monoid-transfer") s.monoid_suite();
    else if (suite == "inverse-transfer") s.inverse_suite();
    else if (suite == "prime-transfer") s.prime_suite();
    else if (suite == "shift-example") s.shift_suite();
  } catch (const CapExceeded& e) {
    rep.checks.push_back(skipped("cap exceeded", e.what()));
    rep.status = "partial";
  } catch (const ContractViolation& e) {
    CheckResult c;
    c.name = "internal consistency";
    c.outcome = Outcome::kFail;
    c.counterexample = e.what();
    rep.checks.push_back(std::move(c));
  }
  if (faulted) {
    for (auto& c : rep.checks) {
      if (c.name != fault) continue;
      c.outcome = Outcome::kFail;
      c.counterexample = "injected by CPBAER_FAULT";
    }
  }
  if (std::any_of(rep.checks.begin(), rep.checks.end(), [](const CheckResult& c) { return c.outcome == Outcome::kFail; })) {
    rep.status = "fail";
  }
  if (cache) cache->store(key, rep);
  return finish(std::move(rep));
}

// ---------------------------------------------------------------------------
// Predicates

struct FlagPredicate::Node {
  enum class Kind { kFlag, kConst, kNot, kAnd, kOr } kind = Kind::kConst;
  std::string flag;
  bool value = false;
  std::vector<std::shared_ptr<const Node>> children;
};

namespace {

using NodePtr = std::shared_ptr<const FlagPredicate::Node>;
using Node = FlagPredicate::Node;

class PredicateParser {
 public:
  explicit PredicateParser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    NodePtr n = parse_or();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw InputError(fmt::format("predicate column {}: {}", pos_ + 1, msg));
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  NodePtr binary(Node::Kind kind, char op, NodePtr (PredicateParser::*next)()) {
    NodePtr left = (this->*next)();
    if (!eat(op)) return left;
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->children.push_back(left);
    do n->children.push_back((this->*next)());
    while (eat(op));
    return n;
  }
  NodePtr parse_or() { return binary(Node::Kind::kOr, '|', &PredicateParser::parse_and); }
  NodePtr parse_and() { return binary(Node::Kind::kAnd, '&', &PredicateParser::parse_unary); }
  NodePtr parse_unary() {
    if (eat('!')) {
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::kNot;
      n->children.push_back(parse_unary());
      return n;
    }
    if (eat('(')) {
      NodePtr inner = parse_or();
      if (!eat(')')) fail("expected ')'");
      return inner;
    }
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    if (start == pos_) fail(pos_ == s_.size() ? "unexpected end of predicate" : "expected a flag name");
    std::string word = s_.substr(start, pos_ - start);
    auto n = std::make_shared<Node>();
    if (word == "true" || word == "false") {
      n->kind = Node::Kind::kConst;
      n->value = word == "true";
      return n;
    }
    const auto& names = flag_names();
    if (std::find(names.begin(), names.end(), word) == names.end()) {
      pos_ = start;
      fail("unknown flag '" + word + "'");
    }
    n->kind = Node::Kind::kFlag;
    n->flag = word;
    return n;
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

std::optional<bool> eval(const Node& n, const PropertyReport& r) {
  switch (n.kind) {
    case Node::Kind::kConst: return n.value;
    case Node::Kind::kFlag: {
      Verdict v = r.flag(n.flag);
      if (v == Verdict::kSkipped) return std::nullopt;
      return v == Verdict::kTrue;
    }
    case Node::Kind::kNot: {
      auto v = eval(*n.children[0], r);
      if (!v) return std::nullopt;
      return !*v;
    }
    case Node::Kind::kAnd:
    case Node::Kind::kOr: {
      const bool absorbing = n.kind == Node::Kind::kOr;  // true absorbs |, false absorbs &
      bool unknown = false;
      for (const auto& c : n.children) {
        auto v = eval(*c, r);
        if (!v) unknown = true;
        else if (*v == absorbing) return absorbing;
      }
      if (unknown) return std::nullopt;
      return !absorbing;
    }
  }
  return std::nullopt;
}

}  // namespace

FlagPredicate FlagPredicate::parse(const std::string& text) {
  FlagPredicate p;
  p.text_ = text;
  p.root_ = PredicateParser(text).parse();
  return p;
}

std::optional<bool> FlagPredicate::evaluate(const PropertyReport& report) const { return eval(*root_, report); }

// ---------------------------------------------------------------------------
// Mining

RunReport run_mine(const std::string& family, const std::string& predicate, std::size_t max_order,
                   const RunOptions& options) {
  auto started = std::chrono::steady_clock::now();
  FlagPredicate pred = FlagPredicate::parse(predicate);
  const auto& families = mine_families();
  if (std::find(families.begin(), families.end(), family) == families.end()) {
    throw InputError("unknown family '" + family + "'");
  }
  RunReport rep;
  rep.version = tool_version();
  rep.command = "mine";
  rep.suite = family;
  rep.target = pred.text();
  rep.bounds = {{"max_order", static_cast<std::int64_t>(max_order)},
                {"cap", static_cast<std::int64_t>(options.order_cap)}};

  RunOptions inner = options;
  inner.timing = false;
  std::int64_t instances = 0, unknown = 0, partial = 0;
  for (const auto& spec : family_instances(family, max_order)) {
    ++instances;
    RunReport r = run_suite("classify", spec, inner);
    if (r.status == "partial") ++partial;
    if (r.properties.empty()) {
      ++unknown;
      continue;
    }
    auto v = pred.evaluate(r.properties.front());
    if (!v) ++unknown;
    if (v.value_or(false)) {
      rep.matches.push_back(spec);
      rep.properties.push_back(r.properties.front());
    }
  }
  CheckResult scan;
  scan.name = "family scan";
  scan.outcome = Outcome::kPass;
  scan.scope = fmt::format("every instance of order <= {}", max_order);
  scan.metrics = {{"instances", instances},
                  {"matches", static_cast<std::int64_t>(rep.matches.size())},
                  {"unknown", unknown},
                  {"partial", partial}};
  if (rep.matches.empty()) scan.note = "no instance matched";
  rep.checks.push_back(std::move(scan));
  if (options.timing) rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return rep;
}

// ---------------------------------------------------------------------------
// Explain

namespace {

const std::vector<std::pair<std::string, std::string>>& definitions() {
  static const std::vector<std::pair<std::string, std::string>> defs = {
      {"abelian", "Every idempotent is central."},
      {"reduced", "No nonzero nilpotent elements."},
      {"reversible", "ab = 0 implies ba = 0."},
      {"semicommutative", "ab = 0 implies aRb = 0."},
      {"prime", "aRb = 0 implies a = 0 or b = 0."},
      {"semiprime", "aRa = 0 implies a = 0; equivalently the prime radical is zero."},
      {"baer", "The right annihilator of every subset is generated, as a right ideal, by an idempotent."},
      {"rickart", "The right annihilator of every single element is generated by an idempotent (right p.p.)."},
      {"quasi_baer", "The right annihilator of every two-sided ideal is generated by an idempotent."},
      {"right_pq_baer", "The right annihilator of every principal right ideal aR is generated by an idempotent."},
      {"left_pq_baer", "The left annihilator of every principal left ideal Ra is generated by an idempotent."},
      {"right_cp_baer",
       "For every idempotent e the right annihilator of eR is cR for some idempotent c. Every cyclic projective "
       "right module is isomorphic to some eR, so this says the annihilator of each cyclic projective module is "
       "generated by an idempotent."},
      {"left_cp_baer", "For every idempotent e the left annihilator of Re is Rc for some idempotent c."},
      {"right_I_extending",
       "For every idempotent e the ideal ReR is an essential right submodule of cR for some idempotent c."},
      {"left_I_extending",
       "For every idempotent e the ideal ReR is an essential left submodule of Rc for some idempotent c."},
      {"alpha_compatible", "ab = 0 if and only if a alpha(b) = 0, for all a, b."},
      {"delta_compatible", "ab = 0 implies a delta(b) = 0, for all a, b."},
      {"rigid", "a alpha(a) = 0 implies a = 0."},
      {"left_semicentral", "An idempotent e with re = ere for every r."},
      {"right_semicentral", "An idempotent e with er = ere for every r."},
      {"spa", "For polynomials f, g: fg = 0 if and only if a_i b_j = 0 for all coefficient pairs."},
  };
  return defs;
}

}  // namespace

std::optional<std::string> explain(const std::string& name) {
  for (const auto& [k, v] : definitions())
    if (k == name) return v;
  return std::nullopt;
}

std::vector<std::string> explainable_names() {
  std::vector<std::string> out;
  for (const auto& d : definitions()) out.push_back(d.first);
  return out;
}

}  // namespace cpb
