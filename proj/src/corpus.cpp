#include "cpb/corpus.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <utility>

#include "cpb/errors.hpp"
#include "cpb/maps.hpp"
#include "cpb/spec.hpp"

namespace cpb {

namespace {

struct Base {
  std::string expr;
  unsigned order;
  std::vector<std::string> sigmas;  // endomorphisms worth pairing with it
};

// Small rings used as coefficient rings, in a fixed order.
std::vector<Base> small_bases(unsigned max_order) {
  std::vector<Base> out;
  auto add = [&](std::string e, unsigned n, std::vector<std::string> s) {
    if (n <= max_order) out.push_back({std::move(e), n, std::move(s)});
  };
  for (unsigned n = 2; n <= 16; ++n) add("zmod " + std::to_string(n), n, {"identity"});
  add("field 2 2", 4, {"identity", "frobenius"});
  add("field 2 3", 8, {"identity", "frobenius"});
  add("field 3 2", 9, {"identity", "frobenius"});
  add("field 2 4", 16, {"identity", "frobenius"});
  add("product (zmod 2) (zmod 2)", 4, {"identity", "swap"});
  add("product (zmod 2) (zmod 3)", 6, {"identity"});
  add("product (zmod 2) (zmod 4)", 8, {"identity"});
  add("product (zmod 3) (zmod 3)", 9, {"identity", "swap"});
  add("product (zmod 2) (field 2 2)", 8, {"identity"});
  add("upper_triangular 2 (zmod 2)", 8, {"identity"});
  add("skew_triangular T 2 (zmod 2) identity", 4, {"identity"});
  add("skew_triangular T 2 (zmod 3) identity", 9, {"identity"});
  return out;
}

// Canonical serialization if the spec builds within the cap. Syntax errors
// propagate: the generator only emits well-formed text.
std::optional<std::string> if_builds(const std::string& text, std::size_t cap) {
  try {
    RingSpec spec = parse_spec(text);
    build_spec(spec, cap);
    return serialize(spec);
  } catch (const CapExceeded&) {
  } catch (const PreconditionError&) {
  } catch (const StructuralError&) {
  }
  return std::nullopt;
}

void keep(std::vector<std::string>& out, std::set<std::string>& seen, const std::string& text, std::size_t cap) {
  if (auto s = if_builds(text, cap); s && seen.insert(*s).second) out.push_back(*s);
}

std::string atom(const std::string& e) { return "(" + e + ")"; }

bool is_prime(unsigned p) {
  if (p < 2) return false;
  for (unsigned d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

void zmod_family(std::vector<std::string>& out, std::set<std::string>& seen, std::size_t max_order) {
  for (unsigned n = 2; n <= max_order; ++n) keep(out, seen, "zmod " + std::to_string(n), max_order);
}

void field_family(std::vector<std::string>& out, std::set<std::string>& seen, std::size_t max_order) {
  for (unsigned p = 2; p <= max_order; ++p) {
    if (!is_prime(p)) continue;
    std::size_t q = p;
    for (unsigned k = 1; q <= max_order; ++k, q *= p) {
      keep(out, seen, "field " + std::to_string(p) + " " + std::to_string(k), max_order);
    }
  }
}

void product_family(std::vector<std::string>& out, std::set<std::string>& seen, std::size_t max_order) {
  auto bases = small_bases(static_cast<unsigned>(std::min<std::size_t>(max_order / 2, 16)));
  for (std::size_t i = 0; i < bases.size(); ++i)
    for (std::size_t j = i; j < bases.size(); ++j) {
      if (std::size_t{bases[i].order} * bases[j].order > max_order) continue;
      keep(out, seen, "product " + atom(bases[i].expr) + " " + atom(bases[j].expr), max_order);
    }
}

void matrix_family(std::vector<std::string>& out, std::set<std::string>& seen, std::size_t max_order,
                   const std::string& ctor, unsigned max_n) {
  for (const auto& b : small_bases(16))
    for (unsigned n = 2; n <= max_n; ++n) {
      std::size_t entries = ctor == "matrix" ? n * n : n * (n + 1) / 2;
      std::size_t order = 1;
      for (std::size_t k = 0; k < entries && order <= max_order; ++k) order *= b.order;
      if (order > max_order) continue;
      keep(out, seen, ctor + " " + std::to_string(n) + " " + atom(b.expr), max_order);
    }
}

void skew_family(std::vector<std::string>& out, std::set<std::string>& seen, std::size_t max_order) {
  static const char* families[] = {"Tn", "S", "T", "A", "B"};
  for (const auto& b : small_bases(16))
    for (const char* fam : families)
      for (unsigned n = 2; n <= 4; ++n)
        for (const auto& sigma : b.sigmas) {
          if (std::string(fam) == "B" && n < 4) continue;
          // The smallest family has n free entries; skip early when even that is too big.
          std::size_t floor_order = 1;
          for (unsigned k = 0; k < 2 && floor_order <= max_order; ++k) floor_order *= b.order;
          if (floor_order > max_order) continue;
          keep(out, seen,
               std::string("skew_triangular ") + fam + " " + std::to_string(n) + " " + atom(b.expr) + " " + sigma,
               max_order);
        }
}

}  // namespace

const std::vector<std::string>& mine_families() {
  static const std::vector<std::string> names = {"zmod",   "field",           "product", "matrix",
                                                 "upper_triangular", "skew_triangular", "corpus"};
  return names;
}

std::vector<std::string> family_instances(const std::string& family, std::size_t max_order) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  if (family == "zmod") {
    zmod_family(out, seen, max_order);
  } else if (family == "field") {
    field_family(out, seen, max_order);
  } else if (family == "product") {
    product_family(out, seen, max_order);
  } else if (family == "matrix") {
    matrix_family(out, seen, max_order, "matrix", 3);
  } else if (family == "upper_triangular") {
    matrix_family(out, seen, max_order, "upper_triangular", 4);
  } else if (family == "skew_triangular") {
    skew_family(out, seen, max_order);
  } else if (family == "corpus") {
    return corpus_ring_specs(max_order);
  } else {
    throw PreconditionError("unknown family '" + family + "'");
  }
  return out;
}

std::vector<std::string> corpus_ring_specs(std::size_t order_cap) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (unsigned n = 2; n <= 32; ++n) keep(out, seen, "zmod " + std::to_string(n), order_cap);
  for (const char* f : {"field 2 2", "field 2 3", "field 2 4", "field 2 5", "field 3 2", "field 3 3", "field 5 2",
                        "field 7 2"}) {
    keep(out, seen, f, order_cap);
  }
  auto bases = small_bases(16);
  for (std::size_t i = 0; i < bases.size(); ++i)
    for (std::size_t j = i; j < bases.size(); ++j) {
      if (bases[i].order * bases[j].order > 64) continue;
      keep(out, seen, "product " + atom(bases[i].expr) + " " + atom(bases[j].expr), order_cap);
    }
  for (const char* b : {"zmod 2", "zmod 3", "field 2 2"}) {
    for (unsigned n = 2; n <= 3; ++n) keep(out, seen, "matrix " + std::to_string(n) + " " + atom(b), order_cap);
    for (unsigned n = 2; n <= 4; ++n)
      keep(out, seen, "upper_triangular " + std::to_string(n) + " " + atom(b), order_cap);
  }
  skew_family(out, seen, order_cap);
  return out;
}

std::vector<std::string> corpus_alpha_specs() {
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& b : small_bases(16)) {
    if (b.order > 9 && b.sigmas.size() == 1) continue;  // keep the extension suites quick
    for (const auto& s : b.sigmas) pairs.emplace_back(b.expr, s);
  }
  pairs.emplace_back("product (field 2 2) (field 2 2)", "swap");
  pairs.emplace_back("skew_triangular T 3 (zmod 2) identity", "identity");
  pairs.emplace_back("skew_triangular S 3 (zmod 2) identity", "identity");
  pairs.emplace_back("skew_triangular T 2 (field 2 2) frobenius", "identity");
  pairs.emplace_back("skew_triangular T 2 (field 2 2) frobenius", "(extend frobenius)");
  pairs.emplace_back("skew_triangular Tn 2 (field 2 2) identity", "(extend frobenius)");
  pairs.emplace_back("matrix 2 (zmod 2)", "identity");
  pairs.emplace_back("quotient (zmod 8) [4]", "identity");
  // (a, b) -> (a, a): a unital endomorphism that is not compatible.
  pairs.emplace_back("product (zmod 2) (zmod 2)", "(table [0 3 0 3])");

  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& [ring, alpha] : pairs) keep(out, seen, "ring: " + ring + "\nalpha: " + alpha + "\n", 1024);
  return out;
}

namespace {

// The additive map sending the i-th additive generator to images[i], if it
// is well defined.
std::optional<std::vector<Elem>> additive_extension(const FiniteRing& r, const std::vector<Elem>& images) {
  auto gens = r.additive_generators();
  std::vector<int> map(r.order(), -1);
  map[r.zero()] = r.zero();
  std::vector<Elem> queue{r.zero()};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    Elem x = queue[head];
    for (std::size_t i = 0; i < gens.size(); ++i) {
      Elem y = r.add(x, gens[i]);
      Elem v = r.add(static_cast<Elem>(map[x]), images[i]);
      if (map[y] < 0) {
        map[y] = v;
        queue.push_back(y);
      } else if (map[y] != v) {
        return std::nullopt;
      }
    }
  }
  return std::vector<Elem>(map.begin(), map.end());
}

// Up to `want` nonzero compatible derivations of each kind (inner, table),
// skipping tables already produced as inner derivations.
void derivation_specs(const std::string& ring_text, const std::string& alpha_text, std::vector<std::string>& out,
                      std::set<std::string>& seen, std::size_t want) {
  RingSpec spec = parse_spec("ring: " + ring_text + "\nalpha: " + alpha_text + "\n");
  BuiltSpec built = build_spec(spec, 1024);
  RingMorphism alpha = built.alpha_or_identity();
  const FiniteRing& r = *built.ring;

  auto emit = [&](DeltaExpr d) {
    RingSpec s = spec;
    s.delta = std::move(d);
    std::string text = serialize(s);
    if (seen.insert(text).second) out.push_back(text);
  };
  emit(DeltaExpr{});

  std::set<std::vector<Elem>> tables;
  std::size_t inner = 0;
  for (std::size_t b = 0; b < r.order() && inner < want; ++b) {
    AlphaDerivation d = inner_derivation(alpha, static_cast<Elem>(b));
    std::vector<Elem> t(d.table().begin(), d.table().end());
    if (d.is_zero() || !is_compatible(d) || !tables.insert(t).second) continue;
    DeltaExpr e;
    e.kind = DeltaExpr::Kind::kInner;
    e.element = static_cast<Elem>(b);
    emit(e);
    ++inner;
  }

  auto gens = r.additive_generators();
  std::size_t combos = 1;
  for (std::size_t i = 0; i < gens.size() && combos <= (1u << 16); ++i) combos *= r.order();
  if (combos > (1u << 16)) return;
  std::size_t found = 0;
  std::vector<Elem> images(gens.size(), 0);
  for (std::size_t code = 0; code < combos && found < want; ++code) {
    std::size_t rest = code;
    for (auto& img : images) {
      img = static_cast<Elem>(rest % r.order());
      rest /= r.order();
    }
    auto map = additive_extension(r, images);
    if (!map || tables.count(*map)) continue;
    auto checked = check_derivation(alpha, *map);
    if (!std::holds_alternative<AlphaDerivation>(checked)) continue;
    const auto& d = std::get<AlphaDerivation>(checked);
    if (d.is_zero() || !is_compatible(d)) continue;
    tables.insert(*map);
    DeltaExpr e;
    e.kind = DeltaExpr::Kind::kTable;
    e.table = *map;
    emit(e);
    ++found;
  }
}

}  // namespace

std::vector<std::string> corpus_delta_specs() {
  const std::vector<std::pair<std::string, std::string>> contexts = {
      {"zmod 2", "identity"},
      {"zmod 4", "identity"},
      {"zmod 6", "identity"},
      {"field 2 2", "identity"},
      {"field 2 2", "frobenius"},
      {"field 2 3", "frobenius"},
      {"field 3 2", "frobenius"},
      {"product (zmod 2) (zmod 2)", "swap"},
      {"product (zmod 2) (zmod 3)", "identity"},
      {"skew_triangular T 2 (zmod 2) identity", "identity"},
      {"upper_triangular 2 (zmod 2)", "identity"},
      {"skew_triangular T 2 (field 2 2) frobenius", "(extend frobenius)"},
  };
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& [ring, alpha] : contexts) derivation_specs(ring, alpha, out, seen, 2);
  return out;
}

}  // namespace cpb
