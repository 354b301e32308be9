#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cpb/ring.hpp"

namespace cpb {

class SkewTriangular;

/// First (a, b) in id order at which a homomorphism or derivation law fails.
struct MapViolation {
  std::string law;  // "zero", "additivity", "multiplicativity", "unital", "leibniz"
  Elem a = 0;
  Elem b = 0;

  std::string describe() const;
  friend bool operator==(const MapViolation&, const MapViolation&) = default;
};

/// A validated unital ring endomorphism stored as a dense image vector.
///
/// All powers are cached up to the first repetition, so alpha^k for any
/// k >= 0 is a table lookup; negative powers need an automorphism.
class RingMorphism {
 public:
  const RingPtr& ring() const { return ring_; }
  Elem operator()(Elem a) const { return data_->map[a]; }
  std::span<const Elem> table() const { return data_->map; }

  bool is_injective() const { return data_->injective; }
  bool is_automorphism() const { return data_->injective; }  // finite carrier
  bool is_identity() const;

  /// alpha^k(a); k < 0 requires an automorphism.
  Elem power(Elem a, long k) const { return power_table(k)[a]; }
  std::span<const Elem> power_table(long k) const;

  /// alpha^(k + period) = alpha^k for every k >= preperiod.
  std::size_t preperiod() const { return data_->preperiod; }
  std::size_t period() const { return data_->period; }

  RingMorphism inverse() const;

  std::string name() const { return data_->name; }
  RingMorphism renamed(std::string name) const;

  friend bool operator==(const RingMorphism& x, const RingMorphism& y) {
    return x.ring_ == y.ring_ && x.table().size() == y.table().size() &&
           std::equal(x.table().begin(), x.table().end(), y.table().begin());
  }

 private:
  friend std::variant<RingMorphism, MapViolation> check_endomorphism(RingPtr, std::vector<Elem>, std::string);

  struct Data {
    std::vector<Elem> map;
    std::vector<std::vector<Elem>> powers;  // alpha^0 .. alpha^(pre+period-1), all distinct
    std::size_t preperiod = 0;
    std::size_t period = 1;
    bool injective = false;
    std::string name;
  };

  RingMorphism(RingPtr ring, std::shared_ptr<const Data> data) : ring_(std::move(ring)), data_(std::move(data)) {}

  RingPtr ring_;
  std::shared_ptr<const Data> data_;
};

/// Validates `map` as a unital ring endomorphism. Checks run in the order
/// zero, additivity, multiplicativity, unital; the first failing law is
/// returned with its first witness pair in id order.
std::variant<RingMorphism, MapViolation> check_endomorphism(RingPtr ring, std::vector<Elem> map,
                                                            std::string name = "table");

/// check_endomorphism that throws PreconditionError on a violation.
RingMorphism endomorphism_or_throw(RingPtr ring, std::vector<Elem> map, std::string name = "table");

/// An alpha-derivation: additive with d(ab) = d(a)b + alpha(a)d(b).
class AlphaDerivation {
 public:
  const RingPtr& ring() const { return alpha_.ring(); }
  const RingMorphism& alpha() const { return alpha_; }
  Elem operator()(Elem a) const { return map_[a]; }
  std::span<const Elem> table() const { return map_; }
  bool is_zero() const;
  const std::string& name() const { return name_; }

 private:
  friend std::variant<AlphaDerivation, MapViolation> check_derivation(const RingMorphism&, std::vector<Elem>,
                                                                      std::string);
  AlphaDerivation(RingMorphism alpha, std::vector<Elem> map, std::string name)
      : alpha_(std::move(alpha)), map_(std::move(map)), name_(std::move(name)) {}

  RingMorphism alpha_;
  std::vector<Elem> map_;
  std::string name_;
};

std::variant<AlphaDerivation, MapViolation> check_derivation(const RingMorphism& alpha, std::vector<Elem> map,
                                                             std::string name = "table");
AlphaDerivation derivation_or_throw(const RingMorphism& alpha, std::vector<Elem> map, std::string name = "table");

// Named generators.
RingMorphism identity_morphism(RingPtr ring);
/// a -> a^p with p the additive order of 1. Throws PreconditionError when
/// this is not an endomorphism of `ring`.
RingMorphism frobenius(RingPtr ring);
/// (a, b) -> (b, a) on R x R built by make_product from two equal factors.
RingMorphism product_swap(RingPtr product, const FiniteRing& factor);
AlphaDerivation zero_derivation(const RingMorphism& alpha);
/// d(a) = b*a - alpha(a)*b.
AlphaDerivation inner_derivation(const RingMorphism& alpha, Elem b);

/// Entrywise extension of alpha (resp. delta) to a skew triangular ring over
/// the same base. Requires alpha*sigma = sigma*alpha (resp. delta*sigma =
/// sigma*delta); throws PreconditionError naming the first failing element.
RingMorphism extend_to_triangular(const RingMorphism& alpha, const SkewTriangular& tri);
AlphaDerivation extend_to_triangular(const AlphaDerivation& delta, const SkewTriangular& tri,
                                     const RingMorphism& extended_alpha);

// Predicates. Each *_witness returns nullopt when the property holds.

/// First (a, b) with exactly one of ab, a*alpha(b) equal to zero.
std::optional<std::pair<Elem, Elem>> alpha_compatibility_witness(const RingMorphism& alpha);
/// First (a, b) with ab = 0 but a*delta(b) != 0.
std::optional<std::pair<Elem, Elem>> delta_compatibility_witness(const AlphaDerivation& delta);
/// First nonzero a with a*alpha(a) = 0.
std::optional<Elem> rigidity_witness(const RingMorphism& alpha);

inline bool is_alpha_compatible(const RingMorphism& a) { return !alpha_compatibility_witness(a); }
inline bool is_delta_compatible(const AlphaDerivation& d) { return !delta_compatibility_witness(d); }
inline bool is_compatible(const AlphaDerivation& d) {
  return is_alpha_compatible(d.alpha()) && is_delta_compatible(d);
}
inline bool is_rigid(const RingMorphism& a) { return !rigidity_witness(a); }

enum class IdempotentScope { kAll, kLeftSemicentral };

struct FixingResult {
  bool holds = true;
  std::optional<Elem> failing;
};

FixingResult fixes_idempotents(const RingMorphism& alpha, IdempotentScope scope);

/// Compatibility scan over an explicit sample of a possibly infinite ring.
/// Returns the first (a, b) in sample order with ab = 0 and a*alpha(b) != 0
/// or the reverse.
template <class T, class Mul, class IsZero, class Alpha>
std::optional<std::pair<T, T>> compatibility_witness_on(std::span<const T> sample, Mul mul, IsZero is_zero,
                                                        Alpha alpha) {
  for (const T& a : sample) {
    for (const T& b : sample) {
      bool plain = is_zero(mul(a, b));
      bool twisted = is_zero(mul(a, alpha(b)));
      if (plain != twisted) return std::pair<T, T>{a, b};
    }
  }
  return std::nullopt;
}

}  // namespace cpb
