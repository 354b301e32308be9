#include <gtest/gtest.h>

#include <random>
#include <set>

#include "cpb/classify.hpp"
#include "cpb/constructors.hpp"
#include "cpb/errors.hpp"
#include "cpb/skew.hpp"
#include "cpb/spec.hpp"
#include "helpers.hpp"

using namespace cpb;
using testing_support::ids;

namespace {

SkewContextPtr context(const std::string& ring, const std::string& alpha, SeriesKind kind, unsigned bound) {
  auto b = build_spec(parse_spec("ring: " + ring + "\nalpha: " + alpha + "\n"));
  return make_skew_context(b.alpha_or_identity(), kind, bound);
}

SkewSeries series(const SkewContextPtr& ctx, std::vector<Elem> coeffs) {
  return SkewSeries::from_exact(ctx, ExactSeries{0, std::move(coeffs)});
}

SkewSeries random_series(std::mt19937_64& rng, const SkewContextPtr& ctx) {
  std::vector<Elem> c(ctx->bound + 1);
  for (auto& a : c) a = testing_support::pick(rng, ctx->base());
  return series(ctx, c);
}

// Every coefficient tuple of length N+1, in lexicographic id order.
std::vector<std::vector<Elem>> all_tuples(std::size_t order, unsigned n) {
  std::vector<std::vector<Elem>> out{{}};
  for (unsigned k = 0; k <= n; ++k) {
    std::vector<std::vector<Elem>> next;
    for (const auto& t : out)
      for (Elem a = 0; a < order; ++a) {
        next.push_back(t);
        next.back().push_back(a);
      }
    out = std::move(next);
  }
  return out;
}

std::set<std::vector<Elem>> as_set(const std::vector<SkewSeries>& items) {
  std::set<std::vector<Elem>> out;
  for (const auto& e : items) out.emplace(e.coefficients().begin(), e.coefficients().end());
  return out;
}

}  // namespace

TEST(SkewArithmetic, IndeterminateTwistsScalars) {
  auto ctx = context("field 2 2", "frobenius", SeriesKind::kPowerSeries, 3);
  auto prod = skew_mul(SkewSeries::monomial(ctx, 1, 1), SkewSeries::constant(ctx, 2));
  EXPECT_EQ(prod, SkewSeries::monomial(ctx, 3, 1));  // x w = w^2 x
  auto back = skew_mul(SkewSeries::constant(ctx, 2), SkewSeries::monomial(ctx, 1, 1));
  EXPECT_EQ(back, SkewSeries::monomial(ctx, 2, 1));
}

TEST(SkewArithmetic, TruncatedProductOverZ6) {
  auto ctx = context("zmod 6", "identity", SeriesKind::kPowerSeries, 2);
  auto p = skew_mul(series(ctx, ids({1, 3})), series(ctx, ids({1, 4})));
  EXPECT_EQ(p, series(ctx, ids({1, 1, 0})));  // 1 + 7x + 12x^2
}

TEST(SkewArithmetic, PolynomialOverflowIsReported) {
  auto ctx = context("zmod 6", "identity", SeriesKind::kPolynomial, 1);
  EXPECT_THROW(skew_mul(series(ctx, ids({0, 1})), series(ctx, ids({0, 1}))), CapExceeded);
  auto other = context("zmod 6", "identity", SeriesKind::kPolynomial, 2);
  EXPECT_THROW(skew_mul(series(ctx, ids({1})), series(other, ids({1}))), StructuralError);
}

TEST(SkewArithmetic, LaurentNeedsAnAutomorphism) {
  auto b = build_spec(parse_spec("ring: product (zmod 2) (zmod 2)\nalpha: (table [0 3 0 3])\n"));
  EXPECT_THROW(make_skew_context(*b.alpha, SeriesKind::kLaurentWindow, 2), PreconditionError);
}

TEST(SkewArithmetic, ExactProductMatchesDefinition) {
  auto alpha = frobenius(make_field(2, 2));
  auto p = exact_product(alpha, ExactSeries{-1, ids({2})}, ExactSeries{0, ids({1, 2})});
  // x^-1 w * (1 + w x) = alpha^-1(1) w x^-1 + w alpha^-1(w) x^0 = w x^-1 + 1.
  EXPECT_TRUE(same_series(*alpha.ring(), p, ExactSeries{-1, ids({2, 1})}));
}

TEST(SkewArithmeticProperty, AssociativeAndDistributive) {
  std::mt19937_64 rng(41);
  for (const auto& text : corpus_alpha_specs()) {
    auto b = build_spec(parse_spec(text));
    if (b.ring->order() > 64) continue;
    auto ctx = make_skew_context(b.alpha_or_identity(), SeriesKind::kPowerSeries, 3);
    for (int trial = 0; trial < 20; ++trial) {
      auto f = random_series(rng, ctx), g = random_series(rng, ctx), h = random_series(rng, ctx);
      ASSERT_EQ(skew_mul(skew_mul(f, g), h), skew_mul(f, skew_mul(g, h))) << text;
      ASSERT_EQ(skew_mul(f, skew_add(g, h)), skew_add(skew_mul(f, g), skew_mul(f, h))) << text;
      ASSERT_EQ(skew_mul(skew_add(f, g), h), skew_add(skew_mul(f, h), skew_mul(g, h))) << text;
    }
  }
}

TEST(SkewIdempotents, ReducedBaseHasOnlyConstants) {
  auto ctx = context("zmod 6", "identity", SeriesKind::kPowerSeries, 1);
  auto en = enumerate_idempotents(ctx);
  ASSERT_EQ(en.items.size(), 4u);
  for (const auto& e : en.items) EXPECT_TRUE(e.is_constant());
}

TEST(SkewIdempotents, DegreeZeroGivesTheBase) {
  auto ctx = context("upper_triangular 2 (zmod 2)", "identity", SeriesKind::kPolynomial, 0);
  auto en = enumerate_idempotents(ctx);
  std::vector<Elem> got;
  for (const auto& e : en.items) got.push_back(e.coeff(0));
  EXPECT_EQ(got, idempotents(ctx->base()).members());
}

TEST(SkewIdempotents, UpperTriangularHasANonconstantIdempotent) {
  auto ctx = context("upper_triangular 2 (zmod 2)", "identity", SeriesKind::kPolynomial, 1);
  auto found = as_set(enumerate_idempotents(ctx).items);
  EXPECT_TRUE(found.count(ids({1, 2})));  // E11 + E12 x
  auto e = series(ctx, ids({1, 2}));
  EXPECT_TRUE(is_idempotent(e));
  EXPECT_TRUE(coefficients_in_ideal_of_constant(e));
  EXPECT_TRUE(is_left_semicentral_bounded(e));
  EXPECT_TRUE(semicentral_structure(e).all());
}

TEST(SkewIdempotents, ComplementsAreIdempotent) {
  for (const char* ring : {"upper_triangular 2 (zmod 2)", "skew_triangular T 2 (field 2 2) frobenius"}) {
    auto ctx = context(ring, "identity", SeriesKind::kPowerSeries, 2);
    auto one = SkewSeries::constant(ctx, ctx->base().one());
    for (const auto& e : enumerate_idempotents(ctx).items) EXPECT_TRUE(is_idempotent(skew_add(one, skew_neg(e))));
  }
}

// Compare the coefficientwise solver with testing every coefficient tuple.
TEST(SkewIdempotents, MatchBruteForceEnumeration) {
  std::size_t compared = 0;
  for (const auto& text : corpus_alpha_specs()) {
    auto b = build_spec(parse_spec(text));
    const std::size_t n = b.ring->order();
    for (SeriesKind kind : {SeriesKind::kPowerSeries, SeriesKind::kPolynomial}) {
      for (unsigned bound = 1; bound <= 3; ++bound) {
        std::size_t tuples = 1;
        for (unsigned k = 0; k <= bound; ++k) tuples *= n;
        if (tuples > 4096) break;
        auto ctx = make_skew_context(b.alpha_or_identity(), kind, bound);
        std::set<std::vector<Elem>> expect;
        for (const auto& t : all_tuples(n, bound)) {
          auto f = series(ctx, t);
          ExactSeries sq = exact_product(ctx->alpha, f.exact(), f.exact());
          bool idem = kind == SeriesKind::kPolynomial ? same_series(*b.ring, sq, f.exact())
                                                      : skew_mul(f, f) == f;
          if (idem) expect.insert(t);
        }
        ASSERT_EQ(as_set(enumerate_idempotents(ctx).items), expect) << text << " bound " << bound;
        ++compared;
      }
    }
  }
  EXPECT_GT(compared, 20u);
}

TEST(SkewAnnihilator, Z6WitnessAndBoundedCheck) {
  auto ctx = context("zmod 6", "identity", SeriesKind::kPolynomial, 2);
  auto base = right_cp_baer(ctx->base());
  auto e = SkewSeries::constant(ctx, 3);
  Elem c = annihilator_generator(e, base);
  EXPECT_EQ(c, 4);
  EXPECT_TRUE(verify_annihilator_bounded(e, c, 0).passed());
  auto check = verify_annihilator_bounded(e, c, 2, 1 << 16);
  EXPECT_TRUE(check.passed()) << check.counterexample;
  EXPECT_EQ(check.brute_checked, 216u);
  // A wrong generator is caught.
  EXPECT_FALSE(verify_annihilator_bounded(e, 1, 2).passed());
}

TEST(SkewAnnihilator, UpperTriangularIdempotentsPassAtHigherDegree) {
  auto ctx = context("upper_triangular 2 (zmod 2)", "identity", SeriesKind::kPowerSeries, 6);
  auto base = right_cp_baer(ctx->base());
  auto en = enumerate_idempotents(ctx);
  ASSERT_FALSE(en.truncated);
  for (const auto& e : en.items) {
    EXPECT_TRUE(coefficients_in_ideal_of_constant(e)) << e.describe();
    if (!is_left_semicentral_bounded(e)) continue;
    EXPECT_TRUE(semicentral_structure(e).all()) << e.describe();
    auto check = verify_annihilator_bounded(e, annihilator_generator(e, base), 6);
    EXPECT_TRUE(check.passed()) << e.describe() << ": " << check.counterexample;
  }
}

TEST(SkewAnnihilator, ConverseRestriction) {
  auto ctx = context("upper_triangular 2 (zmod 2)", "identity", SeriesKind::kPolynomial, 2);
  auto en = enumerate_idempotents(ctx);
  for (Elem e0 : idempotents(ctx->base()).members()) {
    auto r = converse_restriction(en, e0, 2);
    EXPECT_TRUE(r.ok) << int(e0) << ": " << r.detail;
    EXPECT_GE(r.candidates, 1u);
  }
}

TEST(JordanPairs, NormalizeAndMultiply) {
  auto alpha = frobenius(make_field(2, 2));
  EXPECT_EQ(normalize(alpha, {1, 2}), (JordanPair{0, 3}));
  EXPECT_EQ(normalize(alpha, {2, 2}), (JordanPair{0, 2}));
  auto p = pair_product(alpha, {1, 2}, {1, 3});
  EXPECT_EQ(p, (JordanPair{2, 1}));
  EXPECT_EQ(normalize(alpha, p), (JordanPair{0, 1}));
}

TEST(Laurent, WindowSuitePasses) {
  for (const char* spec : {"ring: field 2 2\nalpha: frobenius\n", "ring: zmod 6\n",
                           "ring: upper_triangular 2 (zmod 2)\n"}) {
    auto b = build_spec(parse_spec(spec));
    auto res = laurent_window_suite(b.alpha_or_identity(), 2);
    EXPECT_TRUE(res.passed()) << spec << res.counterexample;
    EXPECT_TRUE(res.normalization_ok);
  }
}

TEST(Multivar, UpperTriangularAtDegreeOne) {
  auto res = multivar_suite(make_upper_triangular(*make_zmod(2), 2), 1, 1);
  EXPECT_TRUE(res.passed()) << res.counterexample;
  EXPECT_GT(res.nonconstant, 0u);
  EXPECT_FALSE(res.truncated);
}

TEST(Spa, FrobeniusOnF4HasTheProductProperty) {
  auto res = spa_bounded_check(frobenius(make_field(2, 2)), 2);
  EXPECT_TRUE(res.holds);
  EXPECT_FALSE(res.sampled);
  EXPECT_EQ(res.pairs, 64u * 64u);
}

TEST(Spa, FailureWitnessIsGenuine) {
  auto alpha = identity_morphism(testing_support::ring("upper_triangular 2 (zmod 2)"));
  auto res = spa_bounded_check(alpha, 1);
  ASSERT_FALSE(res.holds);
  ASSERT_TRUE(res.witness.has_value());
  const auto& r = *alpha.ring();
  auto [f, g] = *res.witness;
  EXPECT_TRUE(is_zero_series(r, exact_product(alpha, f, g)));
  bool some_nonzero = false;
  for (Elem a : f.coeffs)
    for (Elem b : g.coeffs) some_nonzero = some_nonzero || r.mul(a, b) != r.zero();
  EXPECT_TRUE(some_nonzero);
}

TEST(NilpotentWitness, FoundExactlyForNonSemiprimeBases) {
  auto z4 = nilpotent_witness_search(identity_morphism(make_zmod(4)), 1);
  EXPECT_TRUE(z4.found);
  auto z6 = nilpotent_witness_search(identity_morphism(make_zmod(6)), 1);
  EXPECT_FALSE(z6.found);
  EXPECT_TRUE(z6.exhaustive);
  EXPECT_EQ(z6.checked, 35u);
}
