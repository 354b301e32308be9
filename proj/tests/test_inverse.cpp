#include <gtest/gtest.h>

#include <random>
#include <set>

#include "cpb/classify.hpp"
#include "cpb/constructors.hpp"
#include "cpb/errors.hpp"
#include "cpb/inverse_series.hpp"
#include "cpb/skew.hpp"
#include "cpb/spec.hpp"
#include "helpers.hpp"

using namespace cpb;
using testing_support::ids;

namespace {

InverseSeries make_series(const InverseContextPtr& ctx, std::vector<Elem> coeffs) {
  coeffs.resize(ctx->bound() + 1, ctx->base().zero());
  return InverseSeries{ctx, std::move(coeffs)};
}

InverseSeries random_series(std::mt19937_64& rng, const InverseContextPtr& ctx) {
  std::vector<Elem> c(ctx->bound() + 1);
  for (auto& a : c) a = testing_support::pick(rng, ctx->base());
  return make_series(ctx, c);
}

AlphaDerivation f4_inner() { return inner_derivation(frobenius(make_field(2, 2)), 2); }

}  // namespace

TEST(InverseArithmetic, ZeroDerivationGivesASingleTerm) {
  auto d = zero_derivation(frobenius(make_field(2, 2)));
  EXPECT_EQ(xinv_times(d, 2, 3), ids({3, 0, 0}));  // x^-1 w = w^2 x^-1
  EXPECT_EQ(xinv_times(d, 3, 3), ids({2, 0, 0}));
}

TEST(InverseArithmetic, PowersMultiply) {
  auto ctx = make_inverse_context(zero_derivation(identity_morphism(make_zmod(4))), 3);
  for (Elem a = 0; a < 4; ++a) {
    auto p = inv_mul(InverseSeries::monomial(ctx, 1, 1), InverseSeries::monomial(ctx, a, 1));
    EXPECT_EQ(p, InverseSeries::monomial(ctx, a, 2));
  }
  auto top = inv_mul(InverseSeries::monomial(ctx, 1, 2), InverseSeries::monomial(ctx, 1, 2));
  EXPECT_TRUE(top.is_zero());  // x^-4 is past the bound
}

TEST(InverseArithmetic, RequiresAnAutomorphism) {
  auto b = build_spec(parse_spec("ring: product (zmod 2) (zmod 2)\nalpha: (table [0 3 0 3])\n"));
  EXPECT_THROW(make_inverse_context(zero_derivation(*b.alpha), 2), PreconditionError);
  EXPECT_THROW(xinv_times(zero_derivation(*b.alpha), 1, 2), PreconditionError);
}

TEST(InverseArithmetic, XCancelsItsInverse) {
  auto d = f4_inner();
  for (Elem a = 0; a < 4; ++a) {
    auto c = xinv_times(d, a, 5);
    auto back = x_times(d, c);
    ASSERT_EQ(back.size(), c.size() + 1);  // the last entry misses c_(N+1)
    EXPECT_EQ(back[0], a);
    for (std::size_t i = 1; i + 1 < back.size(); ++i) EXPECT_EQ(back[i], 0) << int(a) << " at " << i;
  }
}

TEST(InverseArithmetic, NonzeroDerivationProducesATail) {
  auto d = f4_inner();
  bool tail = false;
  for (Elem a = 0; a < 4; ++a) {
    auto c = xinv_times(d, a, 4);
    tail = tail || c[1] != 0;
  }
  EXPECT_TRUE(tail);
}

// With delta = 0, x^-1 behaves like an indeterminate twisted by alpha^-1.
TEST(InverseArithmetic, ZeroDerivationMatchesSkewPowerSeries) {
  std::mt19937_64 rng(3);
  auto alpha = frobenius(make_field(2, 2));
  auto ctx = make_inverse_context(zero_derivation(alpha), 3);
  auto skew = make_skew_context(alpha.inverse(), SeriesKind::kPowerSeries, 3);
  for (int trial = 0; trial < 200; ++trial) {
    auto f = random_series(rng, ctx), g = random_series(rng, ctx);
    auto sf = SkewSeries::from_exact(skew, ExactSeries{0, f.coeffs});
    auto sg = SkewSeries::from_exact(skew, ExactSeries{0, g.coeffs});
    auto sp = skew_mul(sf, sg);
    auto p = inv_mul(f, g);
    ASSERT_EQ(std::vector<Elem>(sp.coefficients().begin(), sp.coefficients().end()), p.coeffs);
  }
}

TEST(InverseArithmeticProperty, AssociativeOnTheCorpus) {
  std::mt19937_64 rng(17);
  std::size_t contexts = 0;
  for (const auto& text : corpus_delta_specs()) {
    auto b = build_spec(parse_spec(text));
    if (b.ring->order() > 64) continue;
    ++contexts;
    auto ctx = make_inverse_context(b.delta_or_zero(), 3);
    for (int trial = 0; trial < 15; ++trial) {
      auto f = random_series(rng, ctx), g = random_series(rng, ctx), h = random_series(rng, ctx);
      ASSERT_EQ(inv_mul(inv_mul(f, g), h), inv_mul(f, inv_mul(g, h))) << text;
      ASSERT_EQ(inv_mul(f, inv_add(g, h)), inv_add(inv_mul(f, g), inv_mul(f, h))) << text;
    }
  }
  EXPECT_GT(contexts, 10u);
}

TEST(InverseIdempotents, MatchBruteForce) {
  for (const auto& text : corpus_delta_specs()) {
    auto b = build_spec(parse_spec(text));
    const std::size_t n = b.ring->order();
    if (n * n * n > 4096) continue;
    auto d = b.delta_or_zero();
    if (!is_compatible(d)) continue;
    auto ctx = make_inverse_context(d, 2);
    std::set<std::vector<Elem>> expect, got;
    for (Elem a0 = 0; a0 < n; ++a0)
      for (Elem a1 = 0; a1 < n; ++a1)
        for (Elem a2 = 0; a2 < n; ++a2) {
          auto f = make_series(ctx, {a0, a1, a2});
          if (inv_mul(f, f) == f) expect.insert(f.coeffs);
        }
    for (const auto& e : inv_idempotents(ctx).items) got.insert(e.coeffs);
    EXPECT_EQ(got, expect) << text;
  }
}

TEST(InverseIdempotents, ReducedBaseGivesConstants) {
  auto ctx = make_inverse_context(zero_derivation(identity_morphism(make_zmod(6))), 3);
  auto en = inv_idempotents(ctx);
  ASSERT_EQ(en.items.size(), 4u);
  for (const auto& e : en.items) {
    EXPECT_TRUE(inv_coefficients_in_ideal(e));
    for (unsigned i = 1; i <= 3; ++i) EXPECT_EQ(e.coeff(i), 0);
  }
}

TEST(InverseOrbit, AnnihilationIsStable) {
  auto d = zero_derivation(identity_morphism(make_zmod(6)));
  auto res = operator_orbit_annihilation(d, 4, 3);
  EXPECT_TRUE(res.holds);
  EXPECT_TRUE(res.saturated);
  EXPECT_THROW(operator_orbit_annihilation(d, 4, 1), PreconditionError);
}

TEST(InverseOrbit, CompatibleDerivationsKeepAnnihilators) {
  for (const auto& text : corpus_delta_specs()) {
    auto b = build_spec(parse_spec(text));
    auto d = b.delta_or_zero();
    if (!is_compatible(d) || b.ring->order() > 16) continue;
    const auto& r = *b.ring;
    for (Elem e : idempotents(r).members())
      for (Elem a = 0; a < r.order(); ++a) {
        bool killed = true;
        for (Elem x = 0; x < r.order(); ++x) killed = killed && r.mul(r.mul(e, x), a) == r.zero();
        if (killed) EXPECT_TRUE(operator_orbit_annihilation(d, e, a).holds) << text;
      }
  }
}

TEST(InverseStability, LeftSemicentralIdempotentsStay) {
  auto ut = make_upper_triangular(*make_zmod(2), 2);
  auto ctx = make_inverse_context(zero_derivation(identity_morphism(ut)), 3);
  EXPECT_TRUE(semicentral_stability(ctx, 3));   // E11 + E12
  EXPECT_TRUE(semicentral_stability(ctx, 1));   // E11
  EXPECT_FALSE(semicentral_stability(ctx, 4));  // E22 is only right semicentral
}

TEST(InverseTransfer, AnnihilatorsOnZ6) {
  auto res = thm24_verify(zero_derivation(identity_morphism(make_zmod(6))), 3, 4, 1 << 16);
  EXPECT_TRUE(res.passed()) << res.counterexample;
  EXPECT_EQ(res.idempotents, 4u);
  EXPECT_EQ(res.annihilator_ok, std::optional<bool>(true));
}

TEST(InverseTransfer, InnerDerivationOverF4) {
  auto res = thm24_verify(f4_inner(), 3, 4);
  EXPECT_TRUE(res.passed()) << res.counterexample;
  EXPECT_EQ(res.idempotents, 2u);
}

TEST(PrimeTransfer, PrimeFieldBase) {
  auto res = prime_transfer_bounded(zero_derivation(frobenius(make_field(2, 2))), 2);
  EXPECT_TRUE(res.base_prime);
  EXPECT_TRUE(res.passed()) << res.counterexample;
  EXPECT_TRUE(res.exhaustive);
  auto inner = prime_transfer_bounded(f4_inner(), 2);
  EXPECT_TRUE(inner.passed()) << inner.counterexample;
}

TEST(PrimeTransfer, SemiprimeProductBase) {
  auto res = prime_transfer_bounded(zero_derivation(identity_morphism(make_zmod(6))), 2);
  EXPECT_FALSE(res.base_prime);
  EXPECT_TRUE(res.base_semiprime);
  EXPECT_TRUE(res.passed()) << res.counterexample;
}
