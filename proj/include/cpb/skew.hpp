#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cpb/classify.hpp"
#include "cpb/maps.hpp"
#include "cpb/ring.hpp"

namespace cpb {

/// Coefficients of sum c_k x^k for k = low .. low + coeffs.size() - 1, with
/// no truncation. Products follow x a = alpha(a) x; negative exponents need
/// an automorphism.
struct ExactSeries {
  long low = 0;
  std::vector<Elem> coeffs;

  Elem at(long k, Elem zero) const {
    if (k < low || k >= low + static_cast<long>(coeffs.size())) return zero;
    return coeffs[static_cast<std::size_t>(k - low)];
  }
};

ExactSeries exact_product(const RingMorphism& alpha, const ExactSeries& f, const ExactSeries& g);
ExactSeries exact_sum(const FiniteRing& r, const ExactSeries& f, const ExactSeries& g);
/// Zero coefficients at both ends removed; the zero series has no coefficients.
ExactSeries trimmed(const FiniteRing& r, ExactSeries f);
bool is_zero_series(const FiniteRing& r, const ExactSeries& f);
bool same_series(const FiniteRing& r, const ExactSeries& f, const ExactSeries& g);

enum class SeriesKind { kPolynomial, kPowerSeries, kLaurentWindow };

std::string to_string(SeriesKind kind);

/// Shared arithmetic context. `bound` is the top tracked degree N, or the
/// window half-width W for the Laurent kind (exponents -W .. W).
struct SkewContext {
  RingMorphism alpha;
  SeriesKind kind = SeriesKind::kPowerSeries;
  unsigned bound = 4;

  const FiniteRing& base() const { return *alpha.ring(); }
  long low() const { return kind == SeriesKind::kLaurentWindow ? -static_cast<long>(bound) : 0; }
  long high() const { return static_cast<long>(bound); }
};

using SkewContextPtr = std::shared_ptr<const SkewContext>;

/// Throws PreconditionError for a Laurent window over a non-bijective alpha.
SkewContextPtr make_skew_context(RingMorphism alpha, SeriesKind kind, unsigned bound);

/// An element of R[x; alpha] (degree <= N), R[[x; alpha]] / (x^(N+1)), or the
/// window -W .. W of R[x, x^-1; alpha].
class SkewSeries {
 public:
  explicit SkewSeries(SkewContextPtr ctx);

  static SkewSeries constant(SkewContextPtr ctx, Elem a);
  static SkewSeries monomial(SkewContextPtr ctx, Elem a, long k);
  /// Throws CapExceeded if a nonzero coefficient falls outside the tracked
  /// range (power series simply drop it).
  static SkewSeries from_exact(SkewContextPtr ctx, const ExactSeries& f);

  const SkewContext& context() const { return *ctx_; }
  const SkewContextPtr& context_ptr() const { return ctx_; }
  const FiniteRing& base() const { return ctx_->base(); }

  Elem coeff(long k) const;
  void set_coeff(long k, Elem a);
  /// All tracked coefficients, from context().low() upward.
  std::span<const Elem> coefficients() const { return coeffs_; }
  ExactSeries exact() const;

  bool is_zero() const;
  bool is_constant() const;
  std::string describe() const;

  friend bool operator==(const SkewSeries& f, const SkewSeries& g);

 private:
  SkewContextPtr ctx_;
  std::vector<Elem> coeffs_;
};

SkewSeries skew_add(const SkewSeries& f, const SkewSeries& g);
SkewSeries skew_neg(const SkewSeries& f);
/// Coefficient of x^k is sum_{i+j=k} f_i alpha^i(g_j). Power series truncate
/// at N; polynomial and Laurent kinds throw CapExceeded when the product
/// leaves the tracked range. Throws StructuralError on mismatched contexts.
SkewSeries skew_mul(const SkewSeries& f, const SkewSeries& g);

struct IdempotentEnumeration {
  std::vector<SkewSeries> items;
  bool truncated = false;      // stopped at the cap
  std::size_t rejected = 0;    // polynomial kind: truncated idempotents whose exact square differs
};

/// All e with e*e = e, solving one coefficient at a time: e_0 runs over base
/// idempotents and e_k is found from
///   e_k - e_0 e_k - e_k alpha^k(e_0) = sum_{0<i<k} e_i alpha^i(e_{k-i}).
/// Polynomial kind keeps only exact idempotents of R[x; alpha].
/// Output is in lexicographic order of coefficient ids.
IdempotentEnumeration enumerate_idempotents(const SkewContextPtr& ctx, std::size_t cap = std::size_t{1} << 16);

/// e*e == e in the context's arithmetic (exact for the polynomial kind).
bool is_idempotent(const SkewSeries& e);

/// Every coefficient lies in R e_0 R. Throws PreconditionError if e is not
/// idempotent.
bool coefficients_in_ideal_of_constant(const SkewSeries& e);

/// r*e = e*r*e for all monomials r = g x^t, g an additive generator, t <= N.
bool is_left_semicentral_bounded(const SkewSeries& e);

struct SemicentralStructure {
  bool constant_left_semicentral = false;  // e_0 in S_l(R)
  bool absorbs_on_left = false;           // e_0 e_i = e_i
  bool kills_on_right = false;            // e_i e_0 = 0 for i >= 1
  bool same_right_ideal = false;          // e_0 e = e and e e_0 = e_0
  bool all() const { return constant_left_semicentral && absorbs_on_left && kills_on_right && same_right_ideal; }
};

/// Structure of a left semicentral idempotent. Throws PreconditionError when
/// e fails is_left_semicentral_bounded.
SemicentralStructure semicentral_structure(const SkewSeries& e);

/// The base witness c with r(e_0 R) = c R. Throws PreconditionError naming
/// e_0 when the base has none, ContractViolation if c is not left semicentral.
Elem annihilator_generator(const SkewSeries& e, const CpBaerResult& base);

struct AnnihilatorCheck {
  unsigned degree = 0;
  bool base_ok = false;       // r(e_0 R) = c R in the base
  bool contains_ok = false;   // e (g x^t) c = 0 for t <= degree
  bool reduction_ok = false;  // r(e_0 R) is alpha-stable and killed by every e_i R
  std::size_t brute_checked = 0;  // polynomials compared against the direct definition
  bool brute_ok = true;
  std::string counterexample;

  bool passed() const { return base_ok && contains_ok && reduction_ok && brute_ok; }
};

/// Bounded check that the right annihilator of e R[x; alpha] is c R[x; alpha]
/// up to degree D. The inclusion of the annihilator in c R[x] is checked by
/// the coefficient reduction: p is killed iff e_0 R a_j = 0 for every j.
/// When |R|^(D+1) <= brute_limit every polynomial of degree <= D is also
/// tested against the definition.
AnnihilatorCheck verify_annihilator_bounded(const SkewSeries& e, Elem c, unsigned degree,
                                            std::size_t brute_limit = 0);

struct ConverseCheck {
  std::size_t candidates = 0;  // extension idempotents that generate the annihilator of e_0 R[x]
  bool ok = false;
  std::string detail;
};

/// For a base idempotent e_0: every idempotent c(x) among `extension` with
/// e_0 R[x] c(x) = 0 and c(x) a = a on r(e_0 R) has r(e_0 R) = c_0 R, and at
/// least one exists. Bounded at degree D.
ConverseCheck converse_restriction(const IdempotentEnumeration& extension, Elem e0, unsigned degree);

/// x^-i a x^i. Normalization uses x^-i a x^i = x^-(i+j) alpha^j(a) x^(i+j).
struct JordanPair {
  unsigned i = 0;
  Elem a = 0;
  friend bool operator==(const JordanPair&, const JordanPair&) = default;
};

/// With alpha bijective every pair equals (0, alpha^-i(a)).
JordanPair normalize(const RingMorphism& alpha, JordanPair p);
/// (x^-i a x^i)(x^-j b x^j) = x^-(i+j) alpha^j(a) alpha^i(b) x^(i+j).
JordanPair pair_product(const RingMorphism& alpha, JordanPair p, JordanPair q);

struct LaurentSuiteResult {
  unsigned window = 0;
  bool normalization_ok = false;
  bool semicentral_equivalence_ok = false;
  std::optional<bool> idempotents_constant;  // nullopt when the base is not semicommutative and compatible
  std::size_t laurent_idempotents = 0;
  bool search_truncated = false;
  std::string counterexample;

  bool passed() const {
    return normalization_ok && semicentral_equivalence_ok && idempotents_constant.value_or(true);
  }
};

/// Requires alpha bijective. `search_cap` bounds the search-tree nodes of the
/// idempotent scan over the window.
LaurentSuiteResult laurent_window_suite(const RingMorphism& alpha, unsigned window,
                                        std::size_t search_cap = std::size_t{1} << 22);

struct MultivarSuiteResult {
  unsigned n1 = 0, n2 = 0;
  std::size_t idempotents = 0;
  std::size_t nonconstant = 0;
  bool truncated = false;
  bool membership_ok = false;
  std::size_t left_semicentral = 0;
  bool structure_ok = false;
  std::optional<bool> annihilator_ok;  // nullopt when the base is not right cP-Baer
  std::string counterexample;

  bool passed() const { return membership_ok && structure_ok && annihilator_ok.value_or(true); }
};

/// Two commuting indeterminates over R, truncated at x1^(n1+1), x2^(n2+1).
MultivarSuiteResult multivar_suite(const RingPtr& base, unsigned n1, unsigned n2,
                                   std::size_t cap = std::size_t{1} << 16);

struct SpaCheck {
  bool holds = true;
  bool sampled = false;
  std::size_t pairs = 0;
  std::optional<std::pair<ExactSeries, ExactSeries>> witness;
};

/// f g = 0 iff a_i b_j = 0 for all i, j, over polynomials of degree <= N.
/// Exhaustive when the number of pairs is at most `exhaustive_limit`,
/// otherwise `samples` pairs drawn with `seed`.
SpaCheck spa_bounded_check(const RingMorphism& alpha, unsigned degree, std::uint64_t seed = 0,
                           std::size_t exhaustive_limit = std::size_t{1} << 22, std::size_t samples = 200000);

struct NilpotentWitnessSearch {
  bool found = false;
  bool exhaustive = false;
  std::size_t checked = 0;
  ExactSeries witness;
};

/// Searches for nonzero f of degree <= N with f (g x^t) f = 0 for every
/// additive generator g and t <= N, i.e. a bounded witness that R[x; alpha]
/// is not semiprime. Exhaustive when |R|^(N+1) <= limit; otherwise only
/// one- and two-term candidates are tried.
NilpotentWitnessSearch nilpotent_witness_search(const RingMorphism& alpha, unsigned degree,
                                                std::size_t limit = std::size_t{1} << 20);

}  // namespace cpb
