#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/dynamic_bitset.hpp>

namespace cpb {

using Elem = std::uint16_t;

inline constexpr std::size_t kDefaultOrderCap = 4096;
inline constexpr std::size_t kHardOrderLimit = std::size_t{1} << 15;

class FiniteRing;

/// A subset of a ring's carrier, stored as a bitset keyed by element id.
///
/// The flavor records what the producing operation established about the
/// set (right ideal, left ideal, two-sided ideal). It can be re-checked with
/// the `is_*_ideal` predicates and does not take part in equality.
class ElementSet {
 public:
  enum class Flavor { kPlain, kRightIdeal, kLeftIdeal, kTwoSided };
  using Bits = boost::dynamic_bitset<std::uint64_t>;

  ElementSet() = default;
  ElementSet(const FiniteRing& ring);
  ElementSet(const FiniteRing& ring, std::span<const Elem> members);
  ElementSet(const FiniteRing& ring, std::initializer_list<Elem> members);
  ElementSet(const FiniteRing* ring, Bits bits, Flavor flavor = Flavor::kPlain);

  static ElementSet full(const FiniteRing& ring);

  const FiniteRing* ring() const { return ring_; }
  const Bits& bits() const { return bits_; }
  Flavor flavor() const { return flavor_; }
  void set_flavor(Flavor f) { flavor_ = f; }

  std::size_t universe() const { return bits_.size(); }
  std::size_t size() const { return bits_.count(); }
  bool empty() const { return bits_.none(); }
  bool contains(Elem a) const { return a < bits_.size() && bits_.test(a); }
  void insert(Elem a) { bits_.set(a); }
  void erase(Elem a) { bits_.reset(a); }

  /// True when the only member is the zero element (id of the ring's zero).
  bool is_zero_set() const;

  std::vector<Elem> members() const;
  bool subset_of(const ElementSet& other) const { return bits_.is_subset_of(other.bits_); }

  ElementSet intersect(const ElementSet& other) const;
  ElementSet unite(const ElementSet& other) const;

  friend bool operator==(const ElementSet& a, const ElementSet& b) { return a.bits_ == b.bits_; }
  friend bool operator<(const ElementSet& a, const ElementSet& b) { return a.bits_ < b.bits_; }

 private:
  const FiniteRing* ring_ = nullptr;
  Bits bits_;
  Flavor flavor_ = Flavor::kPlain;
};

/// A finite ring with identity given by fully materialized operation tables.
///
/// Instances are immutable once built. Element ids run 0..order()-1; the
/// additive and multiplicative tables are row-major `order() x order()`.
/// Construction only checks structure (sizes and id ranges); the ring axioms
/// are checked separately by validate_axioms().
class FiniteRing {
 public:
  struct Tables {
    std::size_t order = 0;
    std::vector<Elem> add;
    std::vector<Elem> mul;
    Elem zero = 0;
    Elem one = 1;
    std::vector<Elem> neg;  // derived from `add` when empty
    std::string provenance;
    std::vector<std::string> labels;  // optional
  };

  static FiniteRing from_tables(Tables t, std::size_t order_cap = kDefaultOrderCap);

  std::size_t order() const { return n_; }
  Elem zero() const { return zero_; }
  Elem one() const { return one_; }

  Elem add(Elem a, Elem b) const { return add_[std::size_t{a} * n_ + b]; }
  Elem mul(Elem a, Elem b) const { return mul_[std::size_t{a} * n_ + b]; }
  Elem neg(Elem a) const { return neg_[a]; }
  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }

  std::span<const Elem> add_table() const { return add_; }
  std::span<const Elem> mul_table() const { return mul_; }
  std::span<const Elem> neg_table() const { return neg_; }
  std::span<const Elem> mul_row(Elem a) const {
    return std::span<const Elem>(mul_).subspan(std::size_t{a} * n_, n_);
  }

  /// A small set whose left-nested sums (starting from zero) reach every id.
  /// For a ring this is a generating set of the additive group.
  std::span<const Elem> additive_generators() const { return add_gens_; }

  const std::string& provenance() const { return provenance_; }
  std::string label(Elem a) const;
  const std::vector<std::string>& labels() const { return labels_; }

  /// The ring with multiplication reversed. Provenance gets an `op` wrapper.
  FiniteRing opposite() const;

  bool same_tables(const FiniteRing& other) const;

 private:
  FiniteRing() = default;
  void derive();

  std::size_t n_ = 0;
  std::vector<Elem> add_;
  std::vector<Elem> mul_;
  std::vector<Elem> neg_;
  Elem zero_ = 0;
  Elem one_ = 0;
  std::string provenance_;
  std::vector<std::string> labels_;
  std::vector<Elem> add_gens_;
};

using RingPtr = std::shared_ptr<const FiniteRing>;

struct AxiomViolation {
  std::string law;
  std::array<Elem, 3> witness{};

  std::string describe() const;
  friend bool operator==(const AxiomViolation&, const AxiomViolation&) = default;
};

enum class AxiomScan {
  kReduced,     // generator-based tests, exact for finite rings; full scan only on failure
  kExhaustive,  // all pairs and triples
};

/// Returns one entry per violated law, each with the lexicographically first
/// witness triple. Empty iff the tables form a ring with identity and 0 != 1.
std::vector<AxiomViolation> validate_axioms(const FiniteRing& ring,
                                            AxiomScan scan = AxiomScan::kReduced);

/// Additive subgroup generated by `elems`. When `gens_out` is given it
/// receives a (small) generating subset.
ElementSet additive_span(const FiniteRing& ring, std::span<const Elem> elems,
                         std::vector<Elem>* gens_out = nullptr);

ElementSet right_ideal(const FiniteRing& ring, const ElementSet& generators);
ElementSet left_ideal(const FiniteRing& ring, const ElementSet& generators);
ElementSet two_sided_ideal(const FiniteRing& ring, const ElementSet& generators);

/// {a : s*a = 0 for all s in S}.
ElementSet right_annihilator(const FiniteRing& ring, const ElementSet& s);
/// {a : a*s = 0 for all s in S}.
ElementSet left_annihilator(const FiniteRing& ring, const ElementSet& s);

ElementSet sum_of_right_ideals(const FiniteRing& ring, std::span<const ElementSet> ideals);

/// True iff every nonzero m in M has m*R meeting N nontrivially.
/// Throws PreconditionError unless N is a subset of M.
bool is_essential_right_submodule(const FiniteRing& ring, const ElementSet& n, const ElementSet& m);

bool is_additive_subgroup(const FiniteRing& ring, const ElementSet& s);
bool is_right_ideal(const FiniteRing& ring, const ElementSet& s);
bool is_left_ideal(const FiniteRing& ring, const ElementSet& s);
bool is_two_sided_ideal(const FiniteRing& ring, const ElementSet& s);

/// Re-checks the recorded flavor of `s`.
bool flavor_holds(const FiniteRing& ring, const ElementSet& s);

/// Elements of S times additive generators of R, i.e. a generating set of S*R.
std::vector<Elem> times_generators(const FiniteRing& ring, std::span<const Elem> s, bool on_right);

}  // namespace cpb
