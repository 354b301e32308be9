#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cpb/classify.hpp"
#include "cpb/maps.hpp"
#include "cpb/ring.hpp"

namespace cpb {

/// Arithmetic of R[[x^-1; alpha, delta]] modulo x^-(N+1).
///
/// Built from x a = alpha(a) x + delta(a), which gives
///   x^-1 a = sum_{i>=1} alpha^-1 (T^(i-1) a) x^-i,  T = -delta o alpha^-1.
/// The table x^-i b for all i <= N and all b is precomputed.
class InverseContext {
 public:
  /// Throws PreconditionError unless alpha is bijective.
  InverseContext(AlphaDerivation delta, unsigned bound);

  const FiniteRing& base() const { return *delta_.ring(); }
  const RingMorphism& alpha() const { return delta_.alpha(); }
  const AlphaDerivation& delta() const { return delta_; }
  unsigned bound() const { return bound_; }

  /// Coefficients of x^-0 .. x^-N in x^-i b.
  const std::vector<Elem>& shifted(unsigned i, Elem b) const { return table_[i][b]; }

  Elem alpha_inverse(Elem a) const { return alpha_inv_[a]; }
  /// -delta(alpha^-1(a)).
  Elem twist(Elem a) const;

 private:
  AlphaDerivation delta_;
  unsigned bound_;
  std::vector<Elem> alpha_inv_;
  std::vector<std::vector<std::vector<Elem>>> table_;
};

using InverseContextPtr = std::shared_ptr<const InverseContext>;

InverseContextPtr make_inverse_context(AlphaDerivation delta, unsigned bound);

/// sum_{i=0..N} a_i x^-i.
struct InverseSeries {
  InverseContextPtr ctx;
  std::vector<Elem> coeffs;

  static InverseSeries zero(InverseContextPtr ctx);
  static InverseSeries monomial(InverseContextPtr ctx, Elem a, unsigned i);

  Elem coeff(unsigned i) const { return coeffs[i]; }
  bool is_zero() const;
  std::string describe() const;
  friend bool operator==(const InverseSeries& f, const InverseSeries& g) { return f.coeffs == g.coeffs; }
};

/// The first `terms` coefficients c_1..c_terms of x^-1 a (index 0 is x^-1).
/// Throws PreconditionError if alpha is not bijective.
std::vector<Elem> xinv_times(const AlphaDerivation& delta, Elem a, unsigned terms);

/// x * (sum_{i>=1} c_i x^-i) using x c = alpha(c) x + delta(c). Index 0 of
/// the result is x^0, index i is x^-i. The result has c.size() + 1 entries;
/// only those with i < c.size() are exact.
std::vector<Elem> x_times(const AlphaDerivation& delta, const std::vector<Elem>& c);

InverseSeries inv_add(const InverseSeries& f, const InverseSeries& g);
/// Product modulo x^-(N+1). Throws StructuralError on mismatched contexts.
InverseSeries inv_mul(const InverseSeries& f, const InverseSeries& g);

struct InverseIdempotents {
  std::vector<InverseSeries> items;
  bool truncated = false;
};

/// Idempotents modulo x^-(N+1), solved coefficientwise from
///   e_k - e_0 e_k - e_k alpha^-k(e_0) = (terms in e_0 .. e_{k-1}).
/// Throws PreconditionError unless delta is (alpha, delta)-compatible.
InverseIdempotents inv_idempotents(const InverseContextPtr& ctx, std::size_t cap = std::size_t{1} << 16);

/// Every coefficient of e lies in R e_0 R. Throws PreconditionError if e is not idempotent.
bool inv_coefficients_in_ideal(const InverseSeries& e);

bool inv_is_left_semicentral_bounded(const InverseSeries& e);

struct InverseStructure {
  bool constant_left_semicentral = false;
  bool absorbs_on_left = false;
  bool kills_on_right = false;
  bool same_right_ideal = false;
  bool all() const { return constant_left_semicentral && absorbs_on_left && kills_on_right && same_right_ideal; }
};

/// Structure of a left semicentral idempotent; PreconditionError otherwise.
InverseStructure inv_semicentral_structure(const InverseSeries& e);

struct OrbitCheck {
  bool holds = true;
  std::size_t orbit_size = 0;
  bool saturated = false;  // the orbit closed before reaching the word-length bound
  unsigned depth = 0;
  std::optional<Elem> failing;
};

/// For e R a = 0, checks e R w(a) = 0 for every word w in alpha, alpha^-1
/// and delta of length <= max_length. Throws PreconditionError if e R a != 0.
OrbitCheck operator_orbit_annihilation(const AlphaDerivation& delta, Elem e, Elem a, unsigned max_length = 64);

/// c x^-n c = x^-n c for 1 <= n <= N, then c p c = p c for every monomial
/// p = g x^-t with g an additive generator.
bool semicentral_stability(const InverseContextPtr& ctx, Elem c);

struct Thm24Result {
  unsigned n = 0, d = 0;
  std::size_t idempotents = 0;
  bool truncated = false;
  bool membership_ok = true;
  std::size_t left_semicentral = 0;
  bool structure_ok = true;
  std::optional<bool> annihilator_ok;  // nullopt when the base is not right cP-Baer
  std::size_t brute_checked = 0;
  std::string counterexample;

  bool passed() const { return membership_ok && structure_ok && annihilator_ok.value_or(true); }
};

/// Enumerates idempotents at bound N and checks, for each, that the right
/// annihilator of e R[[x^-1]] is c R[[x^-1]] up to degree D with c the base
/// witness for e_0. `brute_limit` enables the direct check on small rings.
Thm24Result thm24_verify(const AlphaDerivation& delta, unsigned n, unsigned d, std::size_t brute_limit = 0);

struct PrimeTransfer {
  bool base_prime = false;
  bool base_semiprime = false;
  unsigned degree = 0;
  bool exhaustive = true;
  std::size_t checked = 0;
  bool prime_ok = true;      // no nonzero f, g with f R g = 0 (checked only for prime bases)
  bool semiprime_ok = true;  // no nonzero f with f R f = 0 (checked only for semiprime bases)
  std::string counterexample;

  bool passed() const { return prime_ok && semiprime_ok; }
};

/// Over polynomials in x^-1 of degree <= N: for a prime base no nonzero f, g
/// have f R g = 0; for a semiprime base no nonzero f has f R f = 0. Products
/// are computed to degree 2N so the lowest term is never truncated.
PrimeTransfer prime_transfer_bounded(const AlphaDerivation& delta, unsigned degree,
                                     std::size_t limit = std::size_t{1} << 22);

}  // namespace cpb
