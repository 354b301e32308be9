#include "cpb/ring.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "cpb/errors.hpp"

namespace cpb {

// ---------------------------------------------------------------------------
// ElementSet

ElementSet::ElementSet(const FiniteRing& ring) : ring_(&ring), bits_(ring.order()) {}

ElementSet::ElementSet(const FiniteRing& ring, std::span<const Elem> members) : ElementSet(ring) {
  for (Elem a : members) {
    if (a >= ring.order()) throw StructuralError("element id out of range");
    bits_.set(a);
  }
}

ElementSet::ElementSet(const FiniteRing& ring, std::initializer_list<Elem> members)
    : ElementSet(ring, std::span<const Elem>(members.begin(), members.size())) {}

ElementSet::ElementSet(const FiniteRing* ring, Bits bits, Flavor flavor)
    : ring_(ring), bits_(std::move(bits)), flavor_(flavor) {}

ElementSet ElementSet::full(const FiniteRing& ring) {
  ElementSet s(ring);
  s.bits_.set();
  s.flavor_ = Flavor::kTwoSided;
  return s;
}

bool ElementSet::is_zero_set() const {
  if (ring_ == nullptr) return bits_.count() == 1 && bits_.test(0);
  return bits_.count() == 1 && bits_.test(ring_->zero());
}

std::vector<Elem> ElementSet::members() const {
  std::vector<Elem> out;
  out.reserve(bits_.count());
  for (auto i = bits_.find_first(); i != Bits::npos; i = bits_.find_next(i)) {
    out.push_back(static_cast<Elem>(i));
  }
  return out;
}

ElementSet ElementSet::intersect(const ElementSet& other) const {
  return ElementSet(ring_, bits_ & other.bits_);
}

ElementSet ElementSet::unite(const ElementSet& other) const {
  return ElementSet(ring_, bits_ | other.bits_);
}

// ---------------------------------------------------------------------------
// FiniteRing

FiniteRing FiniteRing::from_tables(Tables t, std::size_t order_cap) {
  const std::size_t n = t.order;
  if (n == 0) throw StructuralError("ring order must be positive");
  if (n > order_cap || n > kHardOrderLimit) {
    throw CapExceeded("ring order " + std::to_string(n) + " exceeds cap " +
                      std::to_string(std::min(order_cap, kHardOrderLimit)));
  }
  if (t.add.size() != n * n || t.mul.size() != n * n) {
    throw StructuralError("operation tables must have order^2 entries");
  }
  auto in_range = [n](Elem v) { return v < n; };
  if (!std::all_of(t.add.begin(), t.add.end(), in_range) ||
      !std::all_of(t.mul.begin(), t.mul.end(), in_range)) {
    throw StructuralError("table entry out of range");
  }
  if (!in_range(t.zero) || !in_range(t.one)) throw StructuralError("zero/one id out of range");
  if (!t.neg.empty() && (t.neg.size() != n || !std::all_of(t.neg.begin(), t.neg.end(), in_range))) {
    throw StructuralError("negation table malformed");
  }
  if (!t.labels.empty() && t.labels.size() != n) throw StructuralError("label count must equal order");

  FiniteRing r;
  r.n_ = n;
  r.add_ = std::move(t.add);
  r.mul_ = std::move(t.mul);
  r.neg_ = std::move(t.neg);
  r.zero_ = t.zero;
  r.one_ = t.one;
  r.provenance_ = std::move(t.provenance);
  r.labels_ = std::move(t.labels);
  r.derive();
  return r;
}

void FiniteRing::derive() {
  if (neg_.empty()) {
    neg_.assign(n_, 0);
    for (std::size_t a = 0; a < n_; ++a) {
      // Without an inverse the entry stays at `a`; validate_axioms reports it.
      neg_[a] = static_cast<Elem>(a);
      for (std::size_t b = 0; b < n_; ++b) {
        if (add_[a * n_ + b] == zero_) {
          neg_[a] = static_cast<Elem>(b);
          break;
        }
      }
    }
  }

  // Greedy generating set: every id is reached as a left-nested sum
  // zero + g1 + g2 + ... of chosen generators (or is a generator itself).
  boost::dynamic_bitset<std::uint64_t> seen(n_);
  std::vector<Elem> reached{zero_};
  seen.set(zero_);
  add_gens_.clear();
  for (std::size_t id = 0; id < n_; ++id) {
    if (seen.test(id)) continue;
    add_gens_.push_back(static_cast<Elem>(id));
    seen.set(id);
    reached.push_back(static_cast<Elem>(id));
    std::vector<Elem> queue = reached;
    while (!queue.empty()) {
      Elem x = queue.back();
      queue.pop_back();
      for (Elem g : add_gens_) {
        Elem y = add(x, g);
        if (!seen.test(y)) {
          seen.set(y);
          reached.push_back(y);
          queue.push_back(y);
        }
      }
    }
  }
}

std::string FiniteRing::label(Elem a) const {
  if (labels_.empty()) return std::to_string(a);
  return labels_.at(a);
}

FiniteRing FiniteRing::opposite() const {
  FiniteRing r = *this;
  for (std::size_t a = 0; a < n_; ++a) {
    for (std::size_t b = 0; b < n_; ++b) r.mul_[a * n_ + b] = mul_[b * n_ + a];
  }
  r.provenance_ = "op(" + provenance_ + ")";
  return r;
}

bool FiniteRing::same_tables(const FiniteRing& other) const {
  return n_ == other.n_ && zero_ == other.zero_ && one_ == other.one_ && add_ == other.add_ &&
         mul_ == other.mul_;
}

// ---------------------------------------------------------------------------
// Axioms

std::string AxiomViolation::describe() const {
  std::ostringstream os;
  os << law << " fails at (" << witness[0] << ", " << witness[1] << ", " << witness[2] << ")";
  return os.str();
}

namespace {

using Triple = std::array<Elem, 3>;
using Law = std::function<bool(Elem, Elem, Elem)>;

std::optional<Triple> scan(std::size_t n, int arity, const Law& holds) {
  const std::size_t nb = arity >= 2 ? n : 1;
  const std::size_t nc = arity >= 3 ? n : 1;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < nb; ++b) {
      for (std::size_t c = 0; c < nc; ++c) {
        auto ea = static_cast<Elem>(a), eb = static_cast<Elem>(b), ec = static_cast<Elem>(c);
        if (!holds(ea, eb, ec)) return Triple{ea, eb, ec};
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::vector<AxiomViolation> validate_axioms(const FiniteRing& r, AxiomScan mode) {
  const std::size_t n = r.order();
  const bool reduced = mode == AxiomScan::kReduced;
  const auto gens = r.additive_generators();
  std::vector<AxiomViolation> out;

  auto record = [&](const std::string& law, int arity, const Law& holds) {
    if (auto w = scan(n, arity, holds)) {
      out.push_back({law, *w});
      return false;
    }
    return true;
  };

  // Generator-restricted check; on failure fall back to the full scan so the
  // reported witness is the lexicographically first one.
  auto reduced_check = [&](const std::string& law, int arity, const Law& holds,
                           const std::function<bool()>& quick) {
    if (quick()) return true;
    return record(law, arity, holds);
  };

  const Elem zero = r.zero();
  const Elem one = r.one();

  bool identity_ok = record("additive-identity", 1, [&](Elem a, Elem, Elem) {
    return r.add(zero, a) == a && r.add(a, zero) == a;
  });
  bool inverse_ok = record("additive-inverse", 1, [&](Elem a, Elem, Elem) {
    return r.add(a, r.neg(a)) == zero && r.add(r.neg(a), a) == zero;
  });
  bool comm_ok = record("additive-commutativity", 2,
                        [&](Elem a, Elem b, Elem) { return r.add(a, b) == r.add(b, a); });

  Law add_assoc = [&](Elem a, Elem b, Elem c) {
    return r.add(r.add(a, b), c) == r.add(a, r.add(b, c));
  };
  bool assoc_ok;
  if (reduced && identity_ok) {
    // Light's test: the generators together with zero generate the magma.
    assoc_ok = reduced_check("additive-associativity", 3, add_assoc, [&] {
      for (std::size_t x = 0; x < n; ++x)
        for (Elem s : gens)
          for (std::size_t y = 0; y < n; ++y)
            if (!add_assoc(static_cast<Elem>(x), s, static_cast<Elem>(y))) return false;
      return true;
    });
  } else {
    assoc_ok = record("additive-associativity", 3, add_assoc);
  }
  const bool group_ok = identity_ok && inverse_ok && comm_ok && assoc_ok;
  const bool use_gens = reduced && group_ok;

  record("multiplicative-identity", 1,
         [&](Elem a, Elem, Elem) { return r.mul(one, a) == a && r.mul(a, one) == a; });

  Law left_dist = [&](Elem a, Elem b, Elem c) {
    return r.mul(a, r.add(b, c)) == r.add(r.mul(a, b), r.mul(a, c));
  };
  Law right_dist = [&](Elem a, Elem b, Elem c) {
    return r.mul(r.add(a, b), c) == r.add(r.mul(a, c), r.mul(b, c));
  };
  bool ld_ok, rd_ok;
  if (use_gens) {
    // x -> a*x is additive iff a*(b+g) = a*b + a*g for all b and generators g.
    ld_ok = reduced_check("left-distributivity", 3, left_dist, [&] {
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          for (Elem g : gens)
            if (!left_dist(static_cast<Elem>(a), static_cast<Elem>(b), g)) return false;
      return true;
    });
    rd_ok = reduced_check("right-distributivity", 3, right_dist, [&] {
      for (std::size_t a = 0; a < n; ++a)
        for (Elem g : gens)
          for (std::size_t c = 0; c < n; ++c)
            if (!right_dist(static_cast<Elem>(a), g, static_cast<Elem>(c))) return false;
      return true;
    });
  } else {
    ld_ok = record("left-distributivity", 3, left_dist);
    rd_ok = record("right-distributivity", 3, right_dist);
  }

  Law mul_assoc = [&](Elem a, Elem b, Elem c) {
    return r.mul(r.mul(a, b), c) == r.mul(a, r.mul(b, c));
  };
  if (use_gens && ld_ok && rd_ok) {
    // Both sides are additive in each argument.
    reduced_check("associativity", 3, mul_assoc, [&] {
      for (Elem a : gens)
        for (Elem b : gens)
          for (Elem c : gens)
            if (!mul_assoc(a, b, c)) return false;
      return true;
    });
  } else {
    record("associativity", 3, mul_assoc);
  }

  if (zero == one) out.push_back({"zero-ne-one", Triple{zero, one, 0}});
  return out;
}

// ---------------------------------------------------------------------------
// Subgroups and ideals

ElementSet additive_span(const FiniteRing& r, std::span<const Elem> elems, std::vector<Elem>* gens_out) {
  ElementSet s(r);
  std::vector<Elem> members{r.zero()};
  s.insert(r.zero());
  for (Elem t : elems) {
    if (s.contains(t)) continue;
    if (gens_out) gens_out->push_back(t);
    const ElementSet old = s;
    const std::vector<Elem> base = members;
    // Adjoin the cosets H + k*t until k*t falls back into H.
    Elem x = t;
    while (!old.contains(x)) {
      for (Elem m : base) {
        Elem y = r.add(m, x);
        if (!s.contains(y)) {
          s.insert(y);
          members.push_back(y);
        }
      }
      x = r.add(x, t);
    }
  }
  return s;
}

std::vector<Elem> times_generators(const FiniteRing& r, std::span<const Elem> s, bool on_right) {
  std::vector<Elem> out;
  out.reserve(s.size() * r.additive_generators().size());
  for (Elem a : s) {
    for (Elem g : r.additive_generators()) out.push_back(on_right ? r.mul(a, g) : r.mul(g, a));
  }
  return out;
}

namespace {

std::vector<Elem> span_gens(const FiniteRing& r, const ElementSet& s) {
  std::vector<Elem> gens;
  auto m = s.members();
  additive_span(r, m, &gens);
  return gens;
}

void check_ring(const FiniteRing& r, const ElementSet& s) {
  if (s.ring() != nullptr && s.ring() != &r) throw StructuralError("element set belongs to a different ring");
  if (s.universe() != r.order()) throw StructuralError("element set size does not match ring order");
}

}  // namespace

ElementSet right_ideal(const FiniteRing& r, const ElementSet& generators) {
  check_ring(r, generators);
  auto gens = span_gens(r, generators);
  auto prods = times_generators(r, gens, true);
  ElementSet out = additive_span(r, prods);
  out.set_flavor(ElementSet::Flavor::kRightIdeal);
  return out;
}

ElementSet left_ideal(const FiniteRing& r, const ElementSet& generators) {
  check_ring(r, generators);
  auto gens = span_gens(r, generators);
  auto prods = times_generators(r, gens, false);
  ElementSet out = additive_span(r, prods);
  out.set_flavor(ElementSet::Flavor::kLeftIdeal);
  return out;
}

ElementSet two_sided_ideal(const FiniteRing& r, const ElementSet& generators) {
  check_ring(r, generators);
  auto left_gens = times_generators(r, span_gens(r, generators), false);
  std::vector<Elem> lg;
  additive_span(r, left_gens, &lg);
  ElementSet out = additive_span(r, times_generators(r, lg, true));
  out.set_flavor(ElementSet::Flavor::kTwoSided);
  return out;
}

namespace {

ElementSet annihilator(const FiniteRing& r, const ElementSet& s, bool right) {
  check_ring(r, s);
  auto gens = span_gens(r, s);
  ElementSet out(r);
  for (std::size_t a = 0; a < r.order(); ++a) {
    auto ea = static_cast<Elem>(a);
    bool kills = std::all_of(gens.begin(), gens.end(), [&](Elem g) {
      return (right ? r.mul(g, ea) : r.mul(ea, g)) == r.zero();
    });
    if (kills) out.insert(ea);
  }
  if (s.flavor() == ElementSet::Flavor::kTwoSided) {
    out.set_flavor(ElementSet::Flavor::kTwoSided);
    if (!is_two_sided_ideal(r, out)) {
      throw std::logic_error("annihilator of a two-sided ideal is not two-sided");
    }
  } else {
    out.set_flavor(right ? ElementSet::Flavor::kRightIdeal : ElementSet::Flavor::kLeftIdeal);
  }
  return out;
}

}  // namespace

ElementSet right_annihilator(const FiniteRing& r, const ElementSet& s) { return annihilator(r, s, true); }
ElementSet left_annihilator(const FiniteRing& r, const ElementSet& s) { return annihilator(r, s, false); }

ElementSet sum_of_right_ideals(const FiniteRing& r, std::span<const ElementSet> ideals) {
  std::vector<Elem> all;
  for (const auto& i : ideals) {
    check_ring(r, i);
    auto m = i.members();
    all.insert(all.end(), m.begin(), m.end());
  }
  ElementSet out = additive_span(r, all);
  out.set_flavor(ElementSet::Flavor::kRightIdeal);
  return out;
}

bool is_essential_right_submodule(const FiniteRing& r, const ElementSet& n, const ElementSet& m) {
  check_ring(r, n);
  check_ring(r, m);
  if (!n.subset_of(m)) throw PreconditionError("essential submodule test needs N contained in M");
  for (Elem x : m.members()) {
    if (x == r.zero()) continue;
    auto row = r.mul_row(x);
    bool meets = std::any_of(row.begin(), row.end(), [&](Elem y) { return y != r.zero() && n.contains(y); });
    if (!meets) return false;
  }
  return true;
}

bool is_additive_subgroup(const FiniteRing& r, const ElementSet& s) {
  if (!s.contains(r.zero())) return false;
  auto m = s.members();
  return additive_span(r, m) == s;
}

namespace {

bool closed_under(const FiniteRing& r, const ElementSet& s, bool on_right) {
  for (Elem x : s.members()) {
    for (Elem g : r.additive_generators()) {
      if (!s.contains(on_right ? r.mul(x, g) : r.mul(g, x))) return false;
    }
  }
  return true;
}

}  // namespace

bool is_right_ideal(const FiniteRing& r, const ElementSet& s) {
  return is_additive_subgroup(r, s) && closed_under(r, s, true);
}

bool is_left_ideal(const FiniteRing& r, const ElementSet& s) {
  return is_additive_subgroup(r, s) && closed_under(r, s, false);
}

bool is_two_sided_ideal(const FiniteRing& r, const ElementSet& s) {
  return is_additive_subgroup(r, s) && closed_under(r, s, true) && closed_under(r, s, false);
}

bool flavor_holds(const FiniteRing& r, const ElementSet& s) {
  switch (s.flavor()) {
    case ElementSet::Flavor::kPlain: return true;
    case ElementSet::Flavor::kRightIdeal: return is_right_ideal(r, s);
    case ElementSet::Flavor::kLeftIdeal: return is_left_ideal(r, s);
    case ElementSet::Flavor::kTwoSided: return is_two_sided_ideal(r, s);
  }
  return false;
}

}  // namespace cpb
