#include "cpb/maps.hpp"

#include <map>

#include <fmt/format.h>

#include "cpb/constructors.hpp"
#include "cpb/errors.hpp"

namespace cpb {

namespace {

constexpr std::size_t kMaxCachedPowers = 4096;

std::string table_name(std::span<const Elem> map) {
  std::string s = "table [";
  for (std::size_t i = 0; i < map.size(); ++i) s += (i ? " " : "") + std::to_string(map[i]);
  return s + "]";
}

// First (a, b) in id order with law(a, b) false.
template <class Law>
std::optional<std::pair<Elem, Elem>> first_pair(std::size_t n, Law law) {
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (!law(static_cast<Elem>(a), static_cast<Elem>(b))) return std::pair{static_cast<Elem>(a), static_cast<Elem>(b)};
  return std::nullopt;
}

// Additivity of a map reduces to f(x + g) = f(x) + f(g) for generators g.
template <class F>
bool additive_on_generators(const FiniteRing& r, F f) {
  for (std::size_t x = 0; x < r.order(); ++x)
    for (Elem g : r.additive_generators())
      if (f(r.add(static_cast<Elem>(x), g)) != r.add(f(static_cast<Elem>(x)), f(g))) return false;
  return true;
}

void check_map_shape(const FiniteRing& r, std::span<const Elem> map) {
  if (map.size() != r.order()) throw StructuralError("map length must equal the ring order");
  for (Elem v : map)
    if (v >= r.order()) throw StructuralError("map image out of range");
}

}  // namespace

std::string MapViolation::describe() const { return fmt::format("{} fails at ({}, {})", law, a, b); }

bool RingMorphism::is_identity() const {
  for (std::size_t a = 0; a < data_->map.size(); ++a)
    if (data_->map[a] != a) return false;
  return true;
}

std::span<const Elem> RingMorphism::power_table(long k) const {
  const auto& d = *data_;
  if (k < 0) {
    if (!d.injective) throw PreconditionError("negative power of a non-bijective endomorphism");
    // Automorphisms are periodic from 0.
    long m = static_cast<long>(d.period);
    k = ((k % m) + m) % m;
    return d.powers[static_cast<std::size_t>(k)];
  }
  auto uk = static_cast<std::size_t>(k);
  if (uk < d.powers.size()) return d.powers[uk];
  return d.powers[d.preperiod + (uk - d.preperiod) % d.period];
}

RingMorphism RingMorphism::inverse() const {
  if (!is_automorphism()) throw PreconditionError("inverse of a non-bijective endomorphism");
  auto inv = power_table(-1);
  return endomorphism_or_throw(ring_, std::vector<Elem>(inv.begin(), inv.end()), "inverse " + name());
}

RingMorphism RingMorphism::renamed(std::string name) const {
  auto d = std::make_shared<Data>(*data_);
  d->name = std::move(name);
  return RingMorphism(ring_, std::move(d));
}

std::variant<RingMorphism, MapViolation> check_endomorphism(RingPtr ring, std::vector<Elem> map, std::string name) {
  const FiniteRing& r = *ring;
  check_map_shape(r, map);
  const std::size_t n = r.order();
  auto f = [&](Elem a) { return map[a]; };

  if (f(r.zero()) != r.zero()) return MapViolation{"zero", r.zero(), r.zero()};
  if (!additive_on_generators(r, f)) {
    auto w = first_pair(n, [&](Elem a, Elem b) { return f(r.add(a, b)) == r.add(f(a), f(b)); });
    return MapViolation{"additivity", w->first, w->second};
  }
  bool mult_ok = true;
  for (Elem a : r.additive_generators())
    for (Elem b : r.additive_generators())
      if (f(r.mul(a, b)) != r.mul(f(a), f(b))) mult_ok = false;
  if (!mult_ok) {
    auto w = first_pair(n, [&](Elem a, Elem b) { return f(r.mul(a, b)) == r.mul(f(a), f(b)); });
    return MapViolation{"multiplicativity", w->first, w->second};
  }
  if (f(r.one()) != r.one()) return MapViolation{"unital", r.one(), r.one()};

  auto d = std::make_shared<RingMorphism::Data>();
  d->map = map;
  d->name = name == "table" ? table_name(map) : std::move(name);
  std::vector<bool> hit(n, false);
  d->injective = true;
  for (Elem v : map) {
    if (hit[v]) d->injective = false;
    hit[v] = true;
  }
  std::map<std::vector<Elem>, std::size_t> seen;
  std::vector<Elem> cur(n);
  for (std::size_t a = 0; a < n; ++a) cur[a] = static_cast<Elem>(a);
  while (true) {
    auto [it, fresh] = seen.emplace(cur, d->powers.size());
    if (!fresh) {
      d->preperiod = it->second;
      d->period = d->powers.size() - it->second;
      break;
    }
    if (d->powers.size() >= kMaxCachedPowers) throw CapExceeded("endomorphism has too many distinct powers");
    d->powers.push_back(cur);
    for (auto& v : cur) v = map[v];
  }
  return RingMorphism(std::move(ring), std::move(d));
}

RingMorphism endomorphism_or_throw(RingPtr ring, std::vector<Elem> map, std::string name) {
  auto res = check_endomorphism(std::move(ring), std::move(map), std::move(name));
  if (auto* v = std::get_if<MapViolation>(&res)) throw PreconditionError("not an endomorphism: " + v->describe());
  return std::get<RingMorphism>(std::move(res));
}

bool AlphaDerivation::is_zero() const {
  const Elem z = ring()->zero();
  return std::all_of(map_.begin(), map_.end(), [z](Elem v) { return v == z; });
}

std::variant<AlphaDerivation, MapViolation> check_derivation(const RingMorphism& alpha, std::vector<Elem> map,
                                                             std::string name) {
  const FiniteRing& r = *alpha.ring();
  check_map_shape(r, map);
  const std::size_t n = r.order();
  auto d = [&](Elem a) { return map[a]; };
  if (!additive_on_generators(r, d) || d(r.zero()) != r.zero()) {
    auto w = first_pair(n, [&](Elem a, Elem b) { return d(r.add(a, b)) == r.add(d(a), d(b)); });
    if (w) return MapViolation{"additivity", w->first, w->second};
    return MapViolation{"zero", r.zero(), r.zero()};
  }
  auto leibniz = [&](Elem a, Elem b) { return d(r.mul(a, b)) == r.add(r.mul(d(a), b), r.mul(alpha(a), d(b))); };
  bool ok = true;
  for (Elem a : r.additive_generators())
    for (Elem b : r.additive_generators())
      if (!leibniz(a, b)) ok = false;
  if (!ok) {
    auto w = first_pair(n, leibniz);
    return MapViolation{"leibniz", w->first, w->second};
  }
  if (name == "table") name = table_name(map);
  return AlphaDerivation(alpha, std::move(map), std::move(name));
}

AlphaDerivation derivation_or_throw(const RingMorphism& alpha, std::vector<Elem> map, std::string name) {
  auto res = check_derivation(alpha, std::move(map), std::move(name));
  if (auto* v = std::get_if<MapViolation>(&res)) throw PreconditionError("not an alpha-derivation: " + v->describe());
  return std::get<AlphaDerivation>(std::move(res));
}

RingMorphism identity_morphism(RingPtr ring) {
  std::vector<Elem> map(ring->order());
  for (std::size_t a = 0; a < map.size(); ++a) map[a] = static_cast<Elem>(a);
  return endomorphism_or_throw(std::move(ring), std::move(map), "identity");
}

RingMorphism frobenius(RingPtr ring) {
  const FiniteRing& r = *ring;
  std::size_t p = 1;
  for (Elem x = r.one(); x != r.zero(); x = r.add(x, r.one())) ++p;
  std::vector<Elem> map(r.order());
  for (std::size_t a = 0; a < r.order(); ++a) {
    Elem acc = r.one();
    for (std::size_t i = 0; i < p; ++i) acc = r.mul(acc, static_cast<Elem>(a));
    map[a] = acc;
  }
  return endomorphism_or_throw(std::move(ring), std::move(map), "frobenius");
}

RingMorphism product_swap(RingPtr product, const FiniteRing& factor) {
  const std::size_t q = factor.order();
  if (product->order() != q * q) throw PreconditionError("swap needs a product of two equal factors");
  std::vector<Elem> map(q * q);
  for (std::size_t a = 0; a < q * q; ++a) map[a] = static_cast<Elem>(a / q + q * (a % q));
  return endomorphism_or_throw(std::move(product), std::move(map), "swap");
}

AlphaDerivation zero_derivation(const RingMorphism& alpha) {
  return derivation_or_throw(alpha, std::vector<Elem>(alpha.ring()->order(), alpha.ring()->zero()), "zero");
}

AlphaDerivation inner_derivation(const RingMorphism& alpha, Elem b) {
  const FiniteRing& r = *alpha.ring();
  if (b >= r.order()) throw StructuralError("inner derivation element out of range");
  std::vector<Elem> map(r.order());
  for (std::size_t a = 0; a < r.order(); ++a) {
    auto ea = static_cast<Elem>(a);
    map[a] = r.sub(r.mul(b, ea), r.mul(alpha(ea), b));
  }
  return derivation_or_throw(alpha, std::move(map), fmt::format("inner {}", b));
}

namespace {

std::vector<Elem> entrywise(const SkewTriangular& tri, std::span<const Elem> base_map) {
  const FiniteRing& big = *tri.ring();
  std::vector<Elem> map(big.order());
  for (std::size_t id = 0; id < big.order(); ++id) {
    auto params = tri.parameters(static_cast<Elem>(id));
    for (auto& v : params) v = base_map[v];
    map[id] = tri.from_parameters(params);
  }
  return map;
}

}  // namespace

RingMorphism extend_to_triangular(const RingMorphism& alpha, const SkewTriangular& tri) {
  if (alpha.ring().get() != tri.sigma().ring().get() && !alpha.ring()->same_tables(tri.base())) {
    throw PreconditionError("alpha and sigma act on different base rings");
  }
  const auto& sigma = tri.sigma();
  for (std::size_t a = 0; a < tri.base().order(); ++a) {
    auto ea = static_cast<Elem>(a);
    if (alpha(sigma(ea)) != sigma(alpha(ea))) {
      throw PreconditionError(fmt::format("alpha and sigma do not commute at {}", a));
    }
  }
  return endomorphism_or_throw(tri.ring(), entrywise(tri, alpha.table()), "extend " + alpha.name());
}

AlphaDerivation extend_to_triangular(const AlphaDerivation& delta, const SkewTriangular& tri,
                                     const RingMorphism& extended_alpha) {
  if (extended_alpha.ring() != tri.ring()) throw PreconditionError("extended alpha must act on the triangular ring");
  const auto& sigma = tri.sigma();
  for (std::size_t a = 0; a < tri.base().order(); ++a) {
    auto ea = static_cast<Elem>(a);
    if (delta(sigma(ea)) != sigma(delta(ea))) {
      throw PreconditionError(fmt::format("delta and sigma do not commute at {}", a));
    }
  }
  return derivation_or_throw(extended_alpha, entrywise(tri, delta.table()), "extend " + delta.name());
}

std::optional<std::pair<Elem, Elem>> alpha_compatibility_witness(const RingMorphism& alpha) {
  const FiniteRing& r = *alpha.ring();
  return first_pair(r.order(), [&](Elem a, Elem b) {
    return (r.mul(a, b) == r.zero()) == (r.mul(a, alpha(b)) == r.zero());
  });
}

std::optional<std::pair<Elem, Elem>> delta_compatibility_witness(const AlphaDerivation& delta) {
  const FiniteRing& r = *delta.ring();
  return first_pair(r.order(), [&](Elem a, Elem b) {
    return r.mul(a, b) != r.zero() || r.mul(a, delta(b)) == r.zero();
  });
}

std::optional<Elem> rigidity_witness(const RingMorphism& alpha) {
  const FiniteRing& r = *alpha.ring();
  for (std::size_t a = 0; a < r.order(); ++a) {
    auto ea = static_cast<Elem>(a);
    if (ea != r.zero() && r.mul(ea, alpha(ea)) == r.zero()) return ea;
  }
  return std::nullopt;
}

FixingResult fixes_idempotents(const RingMorphism& alpha, IdempotentScope scope) {
  const FiniteRing& r = *alpha.ring();
  for (std::size_t e = 0; e < r.order(); ++e) {
    auto ee = static_cast<Elem>(e);
    if (r.mul(ee, ee) != ee) continue;
    if (scope == IdempotentScope::kLeftSemicentral) {
      bool semicentral = true;
      for (std::size_t x = 0; x < r.order() && semicentral; ++x) {
        Elem xe = r.mul(static_cast<Elem>(x), ee);
        semicentral = xe == r.mul(ee, xe);
      }
      if (!semicentral) continue;
    }
    if (alpha(ee) != ee) return {false, ee};
  }
  return {true, std::nullopt};
}

}  // namespace cpb
