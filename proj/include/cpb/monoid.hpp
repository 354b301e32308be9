#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cpb/classify.hpp"
#include "cpb/ring.hpp"

namespace cpb {

/// An element of (N u {0})^k as its exponent tuple, or of Q+ as
/// {numerator, denominator} in lowest terms.
using MonoidElem = std::vector<std::int64_t>;

enum class MonoidOrder {
  kLex,           // (N u {0})^k, first coordinate most significant
  kRevLex,        // (N u {0})^k, last coordinate most significant
  kDegreeLex,     // (N u {0})^k, total degree then lex; refines the product order
  kRationalUsual  // Q+ with the usual order
};

std::string to_string(MonoidOrder order);
std::optional<MonoidOrder> monoid_order_from_tag(const std::string& tag);

/// A totally ordered, translation-invariant, positive, cancellative monoid.
class OrderedMonoid {
 public:
  /// (N u {0})^k with one of the tuple orders.
  static OrderedMonoid naturals(unsigned k, MonoidOrder order);
  /// Non-negative rationals under addition.
  static OrderedMonoid rationals();

  bool is_rational() const { return order_ == MonoidOrder::kRationalUsual; }
  unsigned rank() const { return rank_; }
  MonoidOrder order() const { return order_; }

  MonoidElem identity() const;
  /// Throws CapExceeded if a rational numerator or denominator overflows.
  MonoidElem combine(const MonoidElem& g, const MonoidElem& h) const;
  /// -1, 0, 1.
  int compare(const MonoidElem& g, const MonoidElem& h) const;
  bool less(const MonoidElem& g, const MonoidElem& h) const { return compare(g, h) < 0; }

  /// Builds an element, reducing rationals; throws PreconditionError for
  /// negative entries or a zero denominator.
  MonoidElem element(std::vector<std::int64_t> parts) const;
  std::string describe(const MonoidElem& g) const;

  /// Box 0..bound_i per coordinate (naturals only), sorted by the order.
  std::vector<MonoidElem> box(const std::vector<unsigned>& bounds) const;

  std::string tag() const;

 private:
  OrderedMonoid(unsigned rank, MonoidOrder order) : rank_(rank), order_(order) {}
  unsigned rank_;
  MonoidOrder order_;
};

/// Finite sum of terms a_g g, kept sorted by the monoid order with the least
/// term first and no zero coefficients.
struct MonoidAlgebraElement {
  std::vector<std::pair<MonoidElem, Elem>> terms;

  friend bool operator==(const MonoidAlgebraElement&, const MonoidAlgebraElement&) = default;
};

struct MonoidContext {
  RingPtr base;
  OrderedMonoid monoid;
  /// Candidate support, sorted by the order. Products are exact; an element
  /// counts as "within bound" when its support lies in this set.
  std::vector<MonoidElem> support;

  bool in_support(const MonoidElem& g) const;
  std::string describe(const MonoidAlgebraElement& f) const;
};

MonoidAlgebraElement monoid_term(const MonoidContext& ctx, Elem a, const MonoidElem& g);
MonoidAlgebraElement monoid_add(const MonoidContext& ctx, const MonoidAlgebraElement& f, const MonoidAlgebraElement& g);

/// Convolution product. Terms above `bound` (in the monoid order) are
/// dropped; they form a two-sided ideal because s*g >= g for every s.
/// Without a bound the product is exact.
MonoidAlgebraElement monoid_mul(const MonoidContext& ctx, const MonoidAlgebraElement& f,
                                const MonoidAlgebraElement& g, const std::optional<MonoidElem>& bound = std::nullopt);

/// For k = g*h != identity: g <= k and h <= k.
bool lemma_l1_check(const OrderedMonoid& m, const MonoidElem& g, const MonoidElem& h);

struct MonoidIdempotents {
  std::vector<MonoidAlgebraElement> items;
  std::size_t escaped = 0;  // candidates whose exact square leaves the support; skipped
  bool truncated = false;
};

/// Exact idempotents with support in ctx.support, solved one support element
/// at a time in increasing order.
MonoidIdempotents monoid_idempotents(const MonoidContext& ctx, std::size_t cap = std::size_t{1} << 16);

struct LeastTermCheck {
  bool least_is_identity = false;  // l2: the least support element is the identity
  bool least_coeff_idempotent = false;
  bool coefficients_in_ideal = false;  // l3
  bool all() const { return least_is_identity && least_coeff_idempotent && coefficients_in_ideal; }
};

/// Throws PreconditionError unless e is nonzero and exactly idempotent with
/// e*e supported in ctx.support.
LeastTermCheck lemma_l2_l3_check(const MonoidContext& ctx, const MonoidAlgebraElement& e);

struct MonoidAnnihilatorCheck {
  bool base_ok = false;
  bool contains_ok = false;
  bool reduction_ok = false;
  std::size_t brute_checked = 0;
  bool brute_ok = true;
  std::string counterexample;
  bool passed() const { return base_ok && contains_ok && reduction_ok && brute_ok; }
};

/// c is the base witness for the least coefficient of e. Checks
/// e (a s) c = 0 for additive generators a and s in the support, and the
/// reduction "p is killed iff e_0 R p_h = 0 for every h". When
/// |R|^|support| <= brute_limit every p supported there is also tested
/// against the definition.
MonoidAnnihilatorCheck thm_t1_check(const MonoidContext& ctx, const MonoidAlgebraElement& e, Elem c,
                                    std::size_t brute_limit = 0);

struct MonoidSuiteResult {
  std::string monoid;
  std::size_t support_size = 0;
  std::size_t idempotents = 0;
  std::size_t nonconstant = 0;
  std::size_t escaped = 0;
  bool truncated = false;
  bool l1_ok = true;
  bool l2_l3_ok = true;
  std::optional<bool> annihilator_ok;  // nullopt when the base is not right cP-Baer
  std::string counterexample;
  bool passed() const { return l1_ok && l2_l3_ok && annihilator_ok.value_or(true); }
};

/// Runs l1 on all pairs of the support, l2/l3 and the annihilator check on
/// every exact idempotent.
MonoidSuiteResult monoid_t1_suite(const MonoidContext& ctx, std::size_t brute_limit = 0);

}  // namespace cpb
