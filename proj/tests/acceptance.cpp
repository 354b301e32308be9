// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <fmt/format.h>

#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "cpb/classify.hpp"
#include "cpb/constructors.hpp"
#include "cpb/corpus.hpp"
#include "cpb/errors.hpp"
#include "cpb/maps.hpp"
#include "cpb/runner.hpp"
#include "cpb/skew.hpp"
#include "cpb/spec.hpp"
#include "oracles.hpp"

using namespace cpb;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Result {
  bool pass = true;
  std::string detail;
};

// Every report produced along the way, in order, for the determinism check.
std::vector<std::pair<std::string, std::function<std::string()>>> replay;
std::string transcript;

RunReport run_logged(const std::string& suite, const std::string& spec, const RunOptions& opt = {}) {
  RunReport r = run_suite(suite, spec, opt);
  std::string json = report_to_json(r);
  transcript += json;
  replay.emplace_back(json, [suite, spec, opt] { return report_to_json(run_suite(suite, spec, opt)); });
  return r;
}

const CheckResult* find_check(const RunReport& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return &c;
  return nullptr;
}

// Tallies the outcome of one named check across many reports.
struct Tally {
  std::size_t pass = 0, fail = 0, skipped = 0, absent = 0;
  std::string first_failure;

  void add(const RunReport& r, const std::string& name) {
    const CheckResult* c = find_check(r, name);
    if (!c) {
      ++absent;
      return;
    }
    switch (c->outcome) {
      case cpb::Outcome::kPass: ++pass; break;
      case cpb::Outcome::kSkipped: ++skipped; break;
      case cpb::Outcome::kFail:
        ++fail;
        if (first_failure.empty()) first_failure = r.spec + ": " + c->counterexample;
        break;
    }
  }
  std::string text() const { return fmt::format("{} pass, {} fail, {} skipped", pass, fail, skipped); }
};

bool applicable(const RunReport& r) { return r.status != "inapplicable"; }

Result criterion_corpus() {
  auto t = Clock::now();
  auto specs = corpus_ring_specs(1024);
  std::size_t axiom_fail = 0, invariant_fail = 0, partial = 0;
  std::string first;
  for (const auto& s : specs) {
    RunReport r = run_logged("classify", s);
    if (r.status == "partial") ++partial;
    const CheckResult* ax = find_check(r, "ring axioms");
    const CheckResult* inv = find_check(r, "flag implications");
    if (!ax || ax->outcome != cpb::Outcome::kPass) {
      ++axiom_fail;
      if (first.empty()) first = s;
    }
    if (!inv || inv->outcome != cpb::Outcome::kPass) {
      ++invariant_fail;
      if (first.empty()) first = s + ": " + (inv ? inv->counterexample : "");
    }
  }
  double secs = seconds_since(t);
  Result o;
  o.pass = specs.size() >= 200 && axiom_fail == 0 && invariant_fail == 0 && partial == 0 && secs <= 120;
  o.detail = fmt::format("{} rings, {} axiom failures, {} implication failures, {} partial, {:.1f}s", specs.size(),
                         axiom_fail, invariant_fail, partial, secs);
  if (!first.empty()) o.detail += "; first: " + first;
  return o;
}

Result criterion_equivalences() {
  Tally t;
  for (const auto& s : corpus_ring_specs(1024)) t.add(run_logged("cp-equivalences", s), "cP-Baer characterizations agree");
  Result o;
  o.pass = t.fail == 0 && t.skipped == 0 && t.absent == 0;
  o.detail = t.text();
  if (!t.first_failure.empty()) o.detail += "; first: " + t.first_failure;
  return o;
}

// Specs of the monoid suites: lex and revlex boxes plus rational supports.
std::vector<std::string> monoid_specs() {
  std::vector<std::string> out;
  const char* monoids[] = {"naturals 2 lex box 2 2", "naturals 2 revlex box 2 2", "naturals 2 product box 2 2",
                           "rationals support 0 1/2 1", "rationals support 0 1/3 2/3 1"};
  for (const auto& s : corpus_alpha_specs()) {
    RingSpec spec = parse_spec(s);
    if (spec.alpha && spec.alpha->kind != MorphismExpr::Kind::kIdentity) continue;
    std::string ring = serialize(*spec.ring);
    for (const char* m : monoids) out.push_back("ring: " + ring + "\nmonoid: " + m + "\n");
  }
  return out;
}

std::vector<std::string> identity_specs() {
  std::vector<std::string> out;
  for (const auto& s : corpus_alpha_specs()) {
    RingSpec spec = parse_spec(s);
    if (spec.alpha && spec.alpha->kind != MorphismExpr::Kind::kIdentity) continue;
    out.push_back(serialize(*spec.ring));
  }
  return out;
}

Result criterion_membership() {
  const std::string name = "coefficients lie in R e0 R";
  std::map<std::string, Tally> by_suite;
  for (const auto& s : corpus_alpha_specs()) {
    for (const char* suite : {"poly-transfer", "series-transfer"}) {
      RunReport r = run_logged(suite, s);
      if (applicable(r)) by_suite[suite].add(r, name);
    }
  }
  for (const auto& s : identity_specs()) by_suite["two-variable"].add(run_logged("two-variable", s), name);
  for (const auto& s : corpus_delta_specs()) {
    RunReport r = run_logged("inverse-transfer", s);
    if (applicable(r)) by_suite["inverse-transfer"].add(r, name);
  }
  // Monoid rings report membership inside the least-term check.
  for (const auto& s : monoid_specs()) {
    if (s.find("box 2 2") == std::string::npos) continue;
    by_suite["monoid-transfer"].add(run_logged("monoid-transfer", s), "least term is an idempotent at the identity");
  }
  Result o;
  for (const auto& [suite, t] : by_suite) {
    o.pass = o.pass && t.fail == 0 && t.pass > 0;
    o.detail += fmt::format("{}{}: {}", o.detail.empty() ? "" : "; ", suite, t.text());
    if (!t.first_failure.empty()) o.detail += " first: " + t.first_failure;
  }
  return o;
}

Result criterion_transfer() {
  Tally ann, conv;
  std::size_t contexts = 0;
  for (const auto& s : corpus_alpha_specs()) {
    for (const char* suite : {"poly-transfer", "series-transfer"}) {
      RunReport r = run_logged(suite, s);
      if (!applicable(r)) continue;
      ++contexts;
      ann.add(r, "annihilator generated by an idempotent");
      conv.add(r, "extension witness restricts to the base");
    }
  }
  Result o;
  o.pass = ann.fail == 0 && conv.fail == 0 && ann.pass > 0 && conv.pass > 0;
  o.detail = fmt::format("{} compatible contexts (N=4, D=6); annihilator {}; converse {}", contexts, ann.text(),
                         conv.text());
  if (!ann.first_failure.empty()) o.detail += "; first: " + ann.first_failure;
  if (!conv.first_failure.empty()) o.detail += "; first: " + conv.first_failure;
  return o;
}

Result criterion_other_suites() {
  Result o;
  auto summarize = [&](const std::string& label, const std::vector<std::string>& specs, const std::string& suite) {
    auto t = Clock::now();
    std::size_t pass = 0, fail = 0, other = 0;
    std::string first;
    for (const auto& s : specs) {
      RunReport r = run_logged(suite, s);
      if (r.status == "pass") ++pass;
      else if (r.status == "fail") {
        ++fail;
        if (first.empty()) first = r.spec;
      } else {
        ++other;
      }
    }
    double secs = seconds_since(t);
    o.pass = o.pass && fail == 0 && pass > 0 && secs <= 300;
    o.detail += fmt::format("{}{}: {} pass, {} fail, {} inapplicable/partial, {:.1f}s", o.detail.empty() ? "" : "; ",
                            label, pass, fail, other, secs);
    if (!first.empty()) o.detail += " first: " + first;
  };
  summarize("two-variable (2,2)", identity_specs(), "two-variable");
  summarize("monoid", monoid_specs(), "monoid-transfer");
  summarize("inverse N=3", corpus_delta_specs(), "inverse-transfer");
  return o;
}

Result criterion_shift() {
  RunReport r = run_logged("shift-example", "");
  const CheckResult* p = find_check(r, "displayed products");
  const CheckResult* w = find_check(r, "not alpha-compatible");
  Result o;
  o.pass = p && w && p->outcome == cpb::Outcome::kPass && w->outcome == cpb::Outcome::kPass &&
           p->metrics.at("ab_zero") == 1 && p->metrics.at("b_alpha_a_equals_b") == 1;
  o.detail = "a*b = 0 and the nonzero product equal to b computed exactly; as defined the shift gives "
             "b*alpha(a) = b while a*alpha(b) = 0, so the printed a*alpha(b) = b has a and b exchanged; "
             "compatibility witness " +
             (w ? w->counterexample : std::string("missing"));
  return o;
}

Result criterion_triangular() {
  std::size_t ok = 0, total = 0;
  std::string first;
  RunOptions opt;
  opt.order_cap = 4096;
  for (const char* field : {"field 2 1", "field 2 2"})
    for (const char* fam : {"T", "A", "B"})
      for (unsigned n = 2; n <= 4; ++n) {
        if (std::string(fam) == "B" && n != 4) continue;
        std::string spec = fmt::format("skew_triangular {} {} ({}) frobenius", fam, n, field);
        ++total;
        RunReport r = run_logged("classify", spec, opt);
        bool holds = !r.properties.empty() && r.properties[0].flag("right_cp_baer") == Verdict::kTrue;
        if (holds) ++ok;
        else if (first.empty()) first = spec + " (" + r.status + ")";
      }
  Result o;
  o.pass = ok == total;
  o.detail = fmt::format("{}/{} right cP-Baer", ok, total);
  if (!first.empty()) o.detail += "; first failure: " + first;
  return o;
}

Result criterion_semiprime() {
  Tally t;
  std::size_t semiprime = 0, not_semiprime = 0;
  for (const auto& s : corpus_alpha_specs()) {
    RunReport r = run_logged("prime-transfer", s);
    if (!applicable(r)) continue;
    const std::string name = "R[x; alpha] semiprime iff the base is";
    t.add(r, name);
    if (const CheckResult* c = find_check(r, name)) (c->metrics.at("base_semiprime") ? semiprime : not_semiprime)++;
  }
  Result o;
  o.pass = t.fail == 0 && t.pass > 0 && semiprime > 0 && not_semiprime > 0;
  o.detail = fmt::format("N=4; {} ({} semiprime bases, {} not); no-witness direction is bounded", t.text(), semiprime,
                         not_semiprime);
  if (!t.first_failure.empty()) o.detail += "; first: " + t.first_failure;
  return o;
}

Result criterion_oracles() {
  std::size_t rings = 0, flag_mismatch = 0, radical_mismatch = 0;
  std::string first;
  for (const auto& s : corpus_ring_specs(16)) {
    BuiltSpec b = build_spec(parse_spec(s));
    const FiniteRing& r = *b.ring;
    ++rings;
    PropertyReport p = classify(r);
    for (const auto& [flag, expected] : oracle::flags(r)) {
      bool got = p.flag(flag) == Verdict::kTrue;
      if (p.flag(flag) == Verdict::kSkipped || got != expected) {
        ++flag_mismatch;
        if (first.empty()) first = s + " " + flag;
      }
    }
    oracle::Mask rad = 0;
    for (Elem a : prime_radical(r).members()) rad |= oracle::bit(a);
    if (rad != oracle::prime_radical(r)) {
      ++radical_mismatch;
      if (first.empty()) first = s + " radical";
    }
  }
  // Coefficient reduction against the definition of the annihilator.
  std::size_t contexts = 0, brute = 0, reduction_mismatch = 0;
  for (const auto& s : corpus_alpha_specs()) {
    BuiltSpec b = build_spec(parse_spec(s));
    if (b.ring->order() > 16) continue;
    RingMorphism alpha = b.alpha_or_identity();
    if (!is_alpha_compatible(alpha)) continue;
    CpBaerResult cp = right_cp_baer(*b.ring);
    if (!cp.holds) continue;
    auto ctx = make_skew_context(alpha, SeriesKind::kPolynomial, 2);
    ++contexts;
    for (const auto& e : enumerate_idempotents(ctx).items) {
      AnnihilatorCheck a = verify_annihilator_bounded(e, annihilator_generator(e, cp), 2, std::size_t{1} << 16);
      brute += a.brute_checked;
      if (a.brute_checked == 0 || !a.brute_ok || !a.passed()) {
        ++reduction_mismatch;
        if (first.empty()) first = s + " " + e.describe();
      }
    }
  }
  Result o;
  o.pass = flag_mismatch == 0 && radical_mismatch == 0 && reduction_mismatch == 0 && brute > 0;
  o.detail = fmt::format(
      "{} rings of order <= 16: {} flag and {} radical mismatches; coefficient reduction on {} contexts, {} "
      "polynomials of degree <= 2 checked directly, {} mismatches",
      rings, flag_mismatch, radical_mismatch, contexts, brute, reduction_mismatch);
  if (!first.empty()) o.detail += "; first: " + first;
  return o;
}

Result criterion_determinism() {
  std::size_t differ = 0;
  std::string first;
  for (const auto& [json, rerun] : replay) {
    if (rerun() != json) {
      ++differ;
      if (first.empty()) first = json.substr(0, 200);
    }
  }
  Result o;
  o.pass = differ == 0 && !replay.empty();
  o.detail = fmt::format("{} reports ({} bytes) rerun cold, {} differ", replay.size(), transcript.size(), differ);
  if (!first.empty()) o.detail += "; first: " + first;
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Result()>>> criteria = {
      {"axioms and flag implications on the corpus", criterion_corpus},
      {"cP-Baer characterizations agree", criterion_equivalences},
      {"idempotent coefficients lie in R e0 R", criterion_membership},
      {"bounded annihilator transfer, R[x; alpha] and R[[x; alpha]]", criterion_transfer},
      {"two-variable, monoid and inverse-series suites", criterion_other_suites},
      {"shift ring is not alpha-compatible", criterion_shift},
      {"skew triangular rings over F2 and F4 are right cP-Baer", criterion_triangular},
      {"semiprime transfer to R[x; alpha]", criterion_semiprime},
      {"fast paths match brute force on rings of order <= 16", criterion_oracles},
      {"determinism of cold runs", criterion_determinism},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    auto t = Clock::now();
    Result o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    all = all && o.pass;
    std::cout << fmt::format("{} {:>2} {} [{:.1f}s]: {}", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                             seconds_since(t), o.detail)
              << std::endl;
  }
  return all ? 0 : 1;
}
