#include "cpb/classify.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include <fmt/format.h>

#include "cpb/errors.hpp"

namespace cpb {

using Bits = ElementSet::Bits;

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::kFalse: return "false";
    case Verdict::kTrue: return "true";
    case Verdict::kSkipped: return "skipped";
  }
  return "?";
}

const std::vector<std::string>& flag_names() {
  static const std::vector<std::string> names = {
      "abelian",       "reduced",       "reversible",   "semicommutative", "prime",
      "semiprime",     "baer",          "rickart",      "quasi_baer",      "right_pq_baer",
      "left_pq_baer",  "right_cp_baer", "left_cp_baer", "right_I_extending", "left_I_extending",
  };
  return names;
}

Verdict PropertyReport::flag(const std::string& name) const {
  auto it = flags.find(name);
  if (it == flags.end()) throw PreconditionError("unknown flag " + name);
  return it->second;
}

bool operator==(const PropertyReport& a, const PropertyReport& b) {
  return a.ring_id == b.ring_id && a.order == b.order && a.partial == b.partial && a.idempotents == b.idempotents &&
         a.left_semicentral == b.left_semicentral && a.right_semicentral == b.right_semicentral &&
         a.central == b.central && a.radical == b.radical && a.flags == b.flags && a.cp_witness == b.cp_witness &&
         a.i_ext_witness == b.i_ext_witness && a.counterexamples == b.counterexamples;
}

namespace {

Verdict verdict(bool b) { return b ? Verdict::kTrue : Verdict::kFalse; }

Elem E(std::size_t a) { return static_cast<Elem>(a); }

// Per-ring tables shared by the annihilator conditions.
struct AnnihilatorData {
  const FiniteRing& r;
  std::size_t n;
  std::vector<Bits> row;       // aR
  std::vector<Bits> ann;       // r({a})
  std::vector<Elem> idem;      // idempotents in id order
  std::map<Bits, Elem> gen_by;  // eR -> first idempotent e generating it

  explicit AnnihilatorData(const FiniteRing& ring) : r(ring), n(ring.order()), row(n, Bits(n)), ann(n, Bits(n)) {
    for (std::size_t a = 0; a < n; ++a) {
      auto mr = r.mul_row(E(a));
      for (std::size_t x = 0; x < n; ++x) {
        row[a].set(mr[x]);
        if (mr[x] == r.zero()) ann[a].set(x);
      }
      if (r.mul(E(a), E(a)) == E(a)) {
        idem.push_back(E(a));
        gen_by.emplace(row[a], E(a));
      }
    }
  }

  // r(aR) = intersection of r(a*g) over additive generators g.
  Bits ann_of_principal(Elem a) const {
    Bits out(n);
    out.set();
    for (Elem g : r.additive_generators()) out &= ann[r.mul(a, g)];
    return out;
  }

  std::optional<Elem> generator_of(const Bits& s) const {
    auto it = gen_by.find(s);
    if (it == gen_by.end()) return std::nullopt;
    return it->second;
  }
};

struct ClosureResult {
  bool capped = false;
  std::optional<std::vector<Elem>> bad;  // elements whose annihilators intersect to a bad ideal
};

// Closes {gens[a]} under intersection and checks every member is
// idempotent-generated. Stops at the first bad member.
ClosureResult check_intersection_closure(const AnnihilatorData& d, const std::vector<Bits>& gens, std::size_t cap) {
  std::map<Bits, std::size_t> index;
  std::vector<Bits> members;
  std::vector<std::vector<Elem>> sources;
  std::vector<Elem> distinct;  // one element per distinct generator set

  auto add = [&](Bits s, std::vector<Elem> src) -> bool {
    if (index.count(s)) return true;
    if (!d.generator_of(s)) {
      return false;
    }
    index.emplace(s, members.size());
    members.push_back(std::move(s));
    sources.push_back(std::move(src));
    return true;
  };

  ClosureResult res;
  for (std::size_t a = 0; a < gens.size(); ++a) {
    if (index.count(gens[a])) continue;
    distinct.push_back(E(a));
    if (!add(gens[a], {E(a)})) {
      res.bad = std::vector<Elem>{E(a)};
      return res;
    }
  }
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (Elem a : distinct) {
      Bits y = members[i] & gens[a];
      if (index.count(y)) continue;
      auto src = sources[i];
      src.push_back(a);
      if (!add(y, src)) {
        res.bad = std::move(src);
        return res;
      }
      if (members.size() > cap) {
        res.capped = true;
        return res;
      }
    }
  }
  return res;
}

std::vector<Elem> to_vector(const Bits& b) {
  std::vector<Elem> out;
  for (auto i = b.find_first(); i != Bits::npos; i = b.find_next(i)) out.push_back(E(i));
  return out;
}

bool left_semicentral(const FiniteRing& r, Elem e) {
  for (Elem g : r.additive_generators()) {
    Elem ge = r.mul(g, e);
    if (ge != r.mul(e, ge)) return false;
  }
  return true;
}

bool right_semicentral(const FiniteRing& r, Elem e) {
  for (Elem g : r.additive_generators()) {
    Elem eg = r.mul(e, g);
    if (eg != r.mul(eg, e)) return false;
  }
  return true;
}

std::vector<bool> unit_table(const FiniteRing& r) {
  std::vector<bool> unit(r.order(), false);
  for (std::size_t x = 0; x < r.order(); ++x) {
    auto row = r.mul_row(E(x));
    unit[x] = std::find(row.begin(), row.end(), r.one()) != row.end();
  }
  return unit;
}

Bits radical_bits(const FiniteRing& r) {
  const std::size_t n = r.order();
  auto unit = unit_table(r);
  Bits j(n);
  for (std::size_t a = 0; a < n; ++a) {
    bool in = true;
    for (std::size_t x = 0; x < n && in; ++x) in = unit[r.sub(r.one(), r.mul(E(x), E(a)))];
    if (in) j.set(a);
  }
  return j;
}

struct RightSide {
  CpBaerResult cp;
  Verdict pq = Verdict::kTrue;
  std::optional<Elem> pq_failing;
  IExtendingResult iext;
};

CpBaerResult cp_from(const AnnihilatorData& d) {
  CpBaerResult res;
  for (Elem e : d.idem) {
    auto c = d.generator_of(d.ann_of_principal(e));
    if (!c) {
      res.holds = false;
      res.failing = e;
      res.witness.clear();
      return res;
    }
    res.witness.emplace(e, *c);
  }
  return res;
}

IExtendingResult iext_from(const AnnihilatorData& d) {
  const FiniteRing& r = d.r;
  IExtendingResult res;
  for (Elem e : d.idem) {
    ElementSet single(r, {e});
    Bits rer = two_sided_ideal(r, single).bits();
    bool found = false;
    for (Elem c : d.idem) {
      const Bits& cr = d.row[c];
      if (!rer.is_subset_of(cr)) continue;
      std::size_t checked = 0;
      bool essential = true;
      for (auto m = cr.find_first(); m != Bits::npos; m = cr.find_next(m)) {
        if (m == r.zero()) continue;
        Bits meet = d.row[m] & rer;
        meet.reset(r.zero());
        if (meet.none()) {
          essential = false;
          break;
        }
        ++checked;
      }
      if (essential) {
        res.witness.emplace(e, IExtendingWitness{c, checked});
        found = true;
        break;
      }
    }
    if (!found) {
      res.holds = false;
      res.failing = e;
      res.witness.clear();
      return res;
    }
  }
  return res;
}

RightSide right_side(const FiniteRing& r) {
  AnnihilatorData d(r);
  RightSide out;
  out.cp = cp_from(d);
  for (std::size_t a = 0; a < d.n; ++a) {
    if (!d.generator_of(d.ann_of_principal(E(a)))) {
      out.pq = Verdict::kFalse;
      out.pq_failing = E(a);
      break;
    }
  }
  out.iext = iext_from(d);
  return out;
}

}  // namespace

ElementSet idempotents(const FiniteRing& r) {
  ElementSet s(r);
  for (std::size_t a = 0; a < r.order(); ++a)
    if (r.mul(E(a), E(a)) == E(a)) s.insert(E(a));
  return s;
}

ElementSet semicentral_idempotents(const FiniteRing& r, Side side) {
  ElementSet s(r);
  for (Elem e : idempotents(r).members()) {
    if (side == Side::kLeft ? left_semicentral(r, e) : right_semicentral(r, e)) s.insert(e);
  }
  return s;
}

ElementSet central_idempotents(const FiniteRing& r) {
  return semicentral_idempotents(r, Side::kLeft).intersect(semicentral_idempotents(r, Side::kRight));
}

ElementSet prime_radical(const FiniteRing& r) {
  ElementSet j(&r, radical_bits(r), ElementSet::Flavor::kTwoSided);
  if (!is_two_sided_ideal(r, j)) throw ContractViolation("radical is not a two-sided ideal");
  // Nilpotent: J^k = 0 for some k <= |J|.
  ElementSet power = j;
  std::size_t steps = 0;
  while (!power.is_zero_set()) {
    if (++steps > r.order()) throw ContractViolation("radical is not nilpotent");
    std::vector<Elem> prods;
    auto jm = j.members();
    for (Elem x : power.members())
      for (Elem y : jm) prods.push_back(r.mul(x, y));
    ElementSet next = additive_span(r, prods);
    if (next == power) throw ContractViolation("radical is not nilpotent");
    power = next;
  }
  return j;
}

bool is_semiprime(const FiniteRing& r) {
  Bits j = radical_bits(r);
  return j.count() == 1;
}

bool is_prime(const FiniteRing& r) {
  AnnihilatorData d(r);
  for (std::size_t a = 0; a < d.n; ++a) {
    if (E(a) == r.zero()) continue;
    if (d.ann_of_principal(E(a)).count() != 1) return false;
  }
  return true;
}

CpBaerResult right_cp_baer(const FiniteRing& r) { return cp_from(AnnihilatorData(r)); }

IExtendingResult right_I_extending(const FiniteRing& r) { return iext_from(AnnihilatorData(r)); }

PropertyReport classify(const FiniteRing& r, const ClassifyOptions& options) {
  PropertyReport rep;
  rep.ring_id = r.provenance();
  rep.order = r.order();
  const std::size_t n = r.order();
  const Elem zero = r.zero();
  const auto gens = r.additive_generators();

  rep.idempotents = idempotents(r).members();
  rep.left_semicentral = semicentral_idempotents(r, Side::kLeft).members();
  rep.right_semicentral = semicentral_idempotents(r, Side::kRight).members();
  std::set_intersection(rep.left_semicentral.begin(), rep.left_semicentral.end(), rep.right_semicentral.begin(),
                        rep.right_semicentral.end(), std::back_inserter(rep.central));

  for (const auto& f : flag_names()) rep.flags[f] = Verdict::kSkipped;
  auto fail = [&](const std::string& flag, std::vector<Elem> ce) {
    rep.flags[flag] = Verdict::kFalse;
    rep.counterexamples[flag] = std::move(ce);
  };

  // Cheap flags, always computed.
  rep.flags["abelian"] = Verdict::kTrue;
  for (Elem e : rep.idempotents) {
    auto g = std::find_if(gens.begin(), gens.end(), [&](Elem x) { return r.mul(e, x) != r.mul(x, e); });
    if (g != gens.end()) {
      // Report the first ring element (not just generator) that fails to commute.
      for (std::size_t x = 0; x < n; ++x) {
        if (r.mul(e, E(x)) != r.mul(E(x), e)) {
          fail("abelian", {e, E(x)});
          break;
        }
      }
      break;
    }
  }
  rep.flags["reduced"] = Verdict::kTrue;
  for (std::size_t a = 0; a < n; ++a) {
    if (E(a) != zero && r.mul(E(a), E(a)) == zero) {
      fail("reduced", {E(a)});
      break;
    }
  }
  rep.flags["reversible"] = Verdict::kTrue;
  for (std::size_t a = 0; a < n && rep.flags["reversible"] == Verdict::kTrue; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (r.mul(E(a), E(b)) == zero && r.mul(E(b), E(a)) != zero) {
        fail("reversible", {E(a), E(b)});
        break;
      }

  if (n > options.order_cap) {
    rep.partial = true;
    return rep;
  }

  AnnihilatorData d(r);

  rep.flags["semicommutative"] = Verdict::kTrue;
  for (std::size_t a = 0; a < n && rep.flags["semicommutative"] == Verdict::kTrue; ++a) {
    const Bits& ra = d.ann[a];
    for (auto b = ra.find_first(); b != Bits::npos; b = ra.find_next(b)) {
      // a*R*b = 0 reduces to a*g*b = 0 over additive generators g.
      bool bad = false;
      for (Elem g : gens) {
        if (r.mul(r.mul(E(a), g), E(b)) != zero) {
          fail("semicommutative", {E(a), g, E(b)});
          bad = true;
          break;
        }
      }
      if (bad) break;
    }
  }

  Bits j = radical_bits(r);
  rep.radical = to_vector(prime_radical(r).bits());
  rep.flags["semiprime"] = verdict(j.count() == 1);
  if (j.count() != 1) {
    // A nonzero a in J with aRa = 0 exists; report the first one.
    std::vector<Elem> ce{rep.radical.size() > 1 ? rep.radical[1] : zero};
    for (Elem a : rep.radical) {
      if (a == zero) continue;
      bool kills = std::all_of(gens.begin(), gens.end(), [&](Elem g) { return r.mul(r.mul(a, g), a) == zero; });
      if (kills) {
        ce = {a};
        break;
      }
    }
    rep.counterexamples["semiprime"] = ce;
  }

  std::vector<Bits> principal(n, Bits(n));
  for (std::size_t a = 0; a < n; ++a) principal[a] = d.ann_of_principal(E(a));

  rep.flags["prime"] = Verdict::kTrue;
  for (std::size_t a = 0; a < n; ++a) {
    if (E(a) == zero || principal[a].count() == 1) continue;
    auto b = principal[a].find_first();
    if (b == zero) b = principal[a].find_next(b);
    fail("prime", {E(a), E(b)});
    break;
  }

  rep.flags["rickart"] = Verdict::kTrue;
  for (std::size_t a = 0; a < n; ++a) {
    if (!d.generator_of(d.ann[a])) {
      fail("rickart", {E(a)});
      break;
    }
  }

  auto lattice_flag = [&](const std::string& flag, const std::vector<Bits>& base_sets) {
    auto res = check_intersection_closure(d, base_sets, options.lattice_cap);
    if (res.bad) {
      fail(flag, *res.bad);
    } else {
      rep.flags[flag] = res.capped ? Verdict::kSkipped : Verdict::kTrue;
    }
  };
  lattice_flag("baer", d.ann);
  lattice_flag("quasi_baer", principal);

  RightSide right = right_side(r);
  FiniteRing op = r.opposite();
  RightSide left = right_side(op);

  rep.flags["right_pq_baer"] = right.pq;
  if (right.pq_failing) rep.counterexamples["right_pq_baer"] = {*right.pq_failing};
  rep.flags["left_pq_baer"] = left.pq;
  if (left.pq_failing) rep.counterexamples["left_pq_baer"] = {*left.pq_failing};

  rep.flags["right_cp_baer"] = verdict(right.cp.holds);
  rep.cp_witness = right.cp.witness;
  if (right.cp.failing) rep.counterexamples["right_cp_baer"] = {*right.cp.failing};
  rep.flags["left_cp_baer"] = verdict(left.cp.holds);
  if (left.cp.failing) rep.counterexamples["left_cp_baer"] = {*left.cp.failing};

  rep.flags["right_I_extending"] = verdict(right.iext.holds);
  rep.i_ext_witness = right.iext.witness;
  if (right.iext.failing) rep.counterexamples["right_I_extending"] = {*right.iext.failing};
  rep.flags["left_I_extending"] = verdict(left.iext.holds);
  if (left.iext.failing) rep.counterexamples["left_I_extending"] = {*left.iext.failing};

  return rep;
}

std::vector<std::string> report_invariant_violations(const PropertyReport& rep) {
  std::vector<std::string> out;
  auto is = [&](const std::string& f) { return rep.flag(f) == Verdict::kTrue; };
  auto isnt = [&](const std::string& f) { return rep.flag(f) == Verdict::kFalse; };
  auto implies = [&](const std::string& a, const std::string& b) {
    if (is(a) && isnt(b)) out.push_back(a + " holds but " + b + " fails");
  };
  implies("baer", "quasi_baer");
  implies("baer", "rickart");
  implies("quasi_baer", "right_pq_baer");
  implies("quasi_baer", "left_pq_baer");
  implies("right_pq_baer", "right_cp_baer");
  implies("left_pq_baer", "left_cp_baer");
  implies("abelian", "right_cp_baer");
  implies("abelian", "left_cp_baer");
  implies("prime", "right_cp_baer");
  implies("prime", "left_cp_baer");
  implies("reduced", "reversible");
  implies("reversible", "semicommutative");
  implies("prime", "semiprime");
  if (is("semiprime")) {
    if (rep.left_semicentral != rep.central || rep.right_semicentral != rep.central) {
      out.push_back("semiprime but semicentral idempotents are not all central");
    }
    for (const char* side : {"right", "left"}) {
      std::string cp = std::string(side) + "_cp_baer", ie = std::string(side) + "_I_extending";
      if (rep.flag(cp) != Verdict::kSkipped && rep.flag(ie) != Verdict::kSkipped && rep.flag(cp) != rep.flag(ie)) {
        out.push_back("semiprime but " + cp + " differs from " + ie);
      }
    }
  }
  if (is("right_cp_baer")) {
    for (Elem e : rep.idempotents) {
      if (!rep.cp_witness.count(e)) out.push_back(fmt::format("right_cp_baer without a witness for {}", e));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Equivalent characterizations of right cP-Baer, computed along different paths.

CpEquivalence cp_baer_equivalences(const FiniteRing& r, std::size_t sum_cap) {
  const std::size_t n = r.order();
  const Elem zero = r.zero();
  std::vector<Elem> idem;
  for (std::size_t a = 0; a < n; ++a)
    if (r.mul(E(a), E(a)) == E(a)) idem.push_back(E(a));

  // Principal right ideals of idempotents, scanned from the table.
  auto right_multiples = [&](Elem c) {
    Bits s(n);
    for (std::size_t x = 0; x < n; ++x) s.set(r.mul(c, E(x)));
    return s;
  };
  std::vector<Bits> cr;
  for (Elem c : idem) cr.push_back(right_multiples(c));
  auto idempotent_generated = [&](const Bits& s) {
    return std::any_of(cr.begin(), cr.end(), [&](const Bits& c) { return c == s; });
  };
  // {x : m*x = 0 for every m in S}, scanning all members of S.
  auto annihilate_members = [&](const Bits& s) {
    Bits out(n);
    for (std::size_t x = 0; x < n; ++x) {
      bool kills = true;
      for (auto m = s.find_first(); m != Bits::npos && kills; m = s.find_next(m)) kills = r.mul(E(m), E(x)) == zero;
      if (kills) out.set(x);
    }
    return out;
  };

  CpEquivalence res;
  std::vector<Bits> ann_er;
  bool item1 = true;
  for (std::size_t k = 0; k < idem.size(); ++k) {
    ann_er.push_back(annihilate_members(cr[k]));
    item1 = item1 && idempotent_generated(ann_er.back());
  }
  res.items[0] = verdict(item1);

  bool item2 = true;
  for (std::size_t k = 0; k < idem.size(); ++k) {
    ElementSet single(r, {idem[k]});
    ElementSet rer = two_sided_ideal(r, single);
    Bits ann_rer = right_annihilator(r, rer).bits();
    item2 = item2 && ann_rer == ann_er[k] && idempotent_generated(ann_rer);
  }
  res.items[1] = verdict(item2);

  std::vector<Elem> sr;
  for (Elem f : idem)
    if (right_semicentral(r, f)) sr.push_back(f);
  bool item3 = true;
  for (std::size_t k = 0; k < idem.size() && item3; ++k) {
    bool found = false;
    for (Elem f : sr) {
      Bits ann_f(n);
      for (std::size_t x = 0; x < n; ++x)
        if (r.mul(f, E(x)) == zero) ann_f.set(x);
      if (ann_f == ann_er[k]) {
        found = true;
        break;
      }
    }
    item3 = found;
  }
  res.items[2] = verdict(item3);

  // Every finite sum of e_i R: close the family under pairwise sums.
  {
    std::set<Bits> seen;
    std::deque<Bits> work;
    bool item4 = true, capped = false;
    for (const Bits& b : cr)
      if (seen.insert(b).second) work.push_back(b);
    std::vector<Bits> generators(seen.begin(), seen.end());
    while (!work.empty() && item4) {
      Bits s = work.front();
      work.pop_front();
      if (!idempotent_generated(annihilate_members(s))) {
        item4 = false;
        break;
      }
      for (const Bits& g : generators) {
        std::vector<Elem> both = to_vector(s | g);
        Bits sum = additive_span(r, both).bits();
        if (seen.insert(sum).second) {
          if (seen.size() > sum_cap) {
            capped = true;
            break;
          }
          work.push_back(sum);
        }
      }
      if (capped) break;
    }
    res.items[3] = capped && item4 ? Verdict::kSkipped : verdict(item4);
  }

  std::optional<Verdict> first;
  for (std::size_t i = 0; i < 4; ++i) {
    if (res.items[i] == Verdict::kSkipped) continue;
    if (!first) first = res.items[i];
    if (res.items[i] != *first) res.agree = false;
  }
  if (!res.agree) {
    res.diagnostic = "characterizations disagree:";
    for (std::size_t i = 0; i < 4; ++i) res.diagnostic += fmt::format(" ({})={}", i + 1, to_string(res.items[i]));
  }
  return res;
}

}  // namespace cpb
