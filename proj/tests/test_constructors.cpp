#include <gtest/gtest.h>

#include <random>

#include "cpb/classify.hpp"
#include "cpb/constructors.hpp"
#include "cpb/errors.hpp"
#include "helpers.hpp"

using namespace cpb;
using testing_support::ids;

namespace {

RingMorphism frob_f4() { return frobenius(make_field(2, 2)); }

SkewTriangular triangular(const RingMorphism& sigma, unsigned n, TriangularFamily f) {
  return SkewTriangular::build(SkewTriangularSpec{sigma, n, f});
}

}  // namespace

TEST(Constructors, Orders) {
  EXPECT_EQ(make_zmod(12)->order(), 12u);
  EXPECT_EQ(make_field(2, 3)->order(), 8u);
  EXPECT_EQ(make_field(3, 2)->order(), 9u);
  EXPECT_EQ(make_product(*make_zmod(2), *make_zmod(3))->order(), 6u);
  EXPECT_EQ(make_matrix(*make_zmod(2), 2)->order(), 16u);
  EXPECT_EQ(make_upper_triangular(*make_zmod(2), 3)->order(), 64u);
  auto z2 = identity_morphism(make_zmod(2));
  EXPECT_EQ(triangular(z2, 3, TriangularFamily::kFullUpper).ring()->order(), 64u);
  EXPECT_EQ(triangular(z2, 3, TriangularFamily::kConstantMainDiag).ring()->order(), 16u);
  EXPECT_EQ(triangular(z2, 3, TriangularFamily::kConstantDiagonals).ring()->order(), 8u);
  for (const auto& s : {"zmod 9", "field 2 4", "matrix 2 (zmod 3)", "upper_triangular 2 (field 2 2)",
                        "skew_triangular A 3 (zmod 2) identity", "skew_triangular B 4 (zmod 2) identity"}) {
    EXPECT_TRUE(validate_axioms(*testing_support::ring(s)).empty()) << s;
  }
}

TEST(Constructors, ProductOfCoprimeCyclicsHasTheFlagsOfZ6) {
  auto prod = classify(*make_product(*make_zmod(2), *make_zmod(3)));
  auto z6 = classify(*make_zmod(6));
  EXPECT_EQ(prod.flags, z6.flags);
  EXPECT_EQ(prod.idempotents.size(), 4u);
}

TEST(Constructors, ProductIdLayout) {
  auto r = make_product(*make_zmod(2), *make_zmod(3));
  // (a, b) has id a + 2b; (1,1) is the identity and (1,0)(0,1) = 0.
  EXPECT_EQ(r->one(), 1 + 2 * 1);
  EXPECT_EQ(r->mul(1, 2), 0);
  EXPECT_EQ(r->add(1, 2), 3);
}

TEST(Constructors, FieldModulusAndUnits) {
  EXPECT_EQ(field_modulus(2, 2), (std::vector<unsigned>{1, 1}));  // x^2 + x + 1
  auto f = make_field(2, 2);
  EXPECT_EQ(f->mul(2, 2), 3);  // w^2 = w + 1
  EXPECT_EQ(f->mul(2, 3), 1);
  auto f9 = make_field(3, 2);
  for (Elem a = 1; a < 9; ++a) {
    bool unit = false;
    for (Elem b = 1; b < 9; ++b) unit = unit || f9->mul(a, b) == f9->one();
    EXPECT_TRUE(unit) << int(a);
  }
}

TEST(Constructors, QuotientOfZ8) {
  auto z8 = make_zmod(8);
  auto q = make_quotient(*z8, ElementSet(*z8, {0, 4}));
  EXPECT_EQ(q->order(), 4u);
  EXPECT_TRUE(validate_axioms(*q).empty());
  EXPECT_EQ(q->mul(2, 2), 0);  // 2*2 = 4 = 0 mod 4
  EXPECT_THROW(make_quotient(*z8, ElementSet(*z8, {0, 3})), PreconditionError);
}

TEST(SkewTriangular, ConstantDiagonalsOverZ2) {
  auto t = triangular(identity_morphism(make_zmod(2)), 2, TriangularFamily::kConstantDiagonals);
  const auto& r = *t.ring();
  ASSERT_EQ(r.order(), 4u);
  // Parameter tuple (a0, a1) has id a0 + 2 a1, i.e. a0 + a1 x.
  Elem x = t.from_coefficients(ids({0, 1}));
  Elem one = t.from_coefficients(ids({1, 0}));
  EXPECT_EQ(x, 2);
  EXPECT_EQ(one, r.one());
  EXPECT_EQ(r.mul(x, x), 0);
  EXPECT_EQ(r.mul(one + 0, x), x);
  EXPECT_EQ(t.matrix_of(x), ids({0, 1, 0, 0}));
  EXPECT_EQ(t.from_matrix(ids({1, 1, 0, 1})), std::optional<Elem>(3));
  EXPECT_FALSE(t.from_matrix(ids({1, 1, 0, 0})).has_value());
}

TEST(SkewTriangular, FrobeniusTwistedProductOverF4) {
  auto sigma = frob_f4();
  auto t = triangular(sigma, 2, TriangularFamily::kConstantDiagonals);
  const auto& base = t.base();
  const auto& r = *t.ring();
  for (Elem a0 = 0; a0 < 4; ++a0)
    for (Elem a1 = 0; a1 < 4; ++a1)
      for (Elem b0 = 0; b0 < 4; ++b0)
        for (Elem b1 = 0; b1 < 4; ++b1) {
          Elem a = t.from_coefficients(std::vector<Elem>{a0, a1});
          Elem b = t.from_coefficients(std::vector<Elem>{b0, b1});
          auto c = t.coefficients(r.mul(a, b));
          ASSERT_EQ(c[0], base.mul(a0, b0));
          ASSERT_EQ(c[1], base.add(base.mul(a0, b1), base.mul(a1, base.mul(b0, b0))));
        }
}

TEST(SkewTriangular, FullUpperWithIdentityIsUpperTriangular) {
  for (unsigned n : {2u, 3u}) {
    auto t = triangular(identity_morphism(make_zmod(2)), n, TriangularFamily::kFullUpper);
    EXPECT_TRUE(t.ring()->same_tables(*make_upper_triangular(*make_zmod(2), n))) << n;
  }
}

TEST(SkewTriangular, MatrixRoundTrip) {
  auto t = triangular(frob_f4(), 3, TriangularFamily::kConstantMainDiag);
  for (Elem id = 0; id < t.ring()->order(); ++id) {
    auto m = t.matrix_of(id);
    EXPECT_EQ(t.from_matrix(m), std::optional<Elem>(id));
    EXPECT_EQ(t.from_parameters(t.parameters(id)), id);
  }
  EXPECT_THROW(t.coefficients(0), PreconditionError);
}

TEST(SkewTriangular, ProductMatchesSkewMatrixFormula) {
  auto sigma = frob_f4();
  std::mt19937_64 rng(5);
  for (auto family : {TriangularFamily::kConstantMainDiag, TriangularFamily::kA}) {
    auto t = triangular(sigma, 3, family);
    const auto& r = *t.ring();
    for (int trial = 0; trial < 300; ++trial) {
      Elem a = testing_support::pick(rng, r), b = testing_support::pick(rng, r);
      auto expect = skew_matrix_product(t.base(), &sigma, 3, t.matrix_of(a), t.matrix_of(b));
      ASSERT_EQ(t.matrix_of(r.mul(a, b)), expect) << family_tag(family);
    }
  }
}

TEST(SkewTriangular, FamilyTags) {
  for (auto f : {TriangularFamily::kFullUpper, TriangularFamily::kConstantMainDiag,
                 TriangularFamily::kConstantDiagonals, TriangularFamily::kA, TriangularFamily::kB}) {
    EXPECT_EQ(family_from_tag(family_tag(f)), std::optional<TriangularFamily>(f));
  }
  EXPECT_FALSE(family_from_tag("Q").has_value());
}

class ShiftRingTest : public ::testing::Test {
 protected:
  ShiftRing s{make_zmod(2)};

  ShiftRing::Element random_element(std::mt19937_64& rng) {
    ShiftRing::Element x = s.scalar(static_cast<Elem>(rng() & 1));
    for (long i = -3; i <= 3; ++i)
      if (rng() & 1) x = s.add(x, s.unit_vector(i, 1));
    return x;
  }
};

TEST_F(ShiftRingTest, UnitVectorsAreOrthogonalIdempotents) {
  auto e0 = s.unit_vector(0, 1), e1 = s.unit_vector(1, 1);
  EXPECT_EQ(s.mul(e0, e0), e0);
  EXPECT_TRUE(s.is_zero(s.mul(e0, e1)));
  EXPECT_EQ(s.mul(s.one(), e1), e1);
}

TEST_F(ShiftRingTest, ShiftMovesPositionsDown) {
  EXPECT_EQ(s.alpha(s.unit_vector(1, 1)), s.unit_vector(0, 1));
  EXPECT_EQ(s.alpha(s.one()), s.one());
  EXPECT_EQ(s.describe(s.add(s.unit_vector(1, 1), s.scalar(0))), "0*1 + 1*e[1]");
}

TEST_F(ShiftRingTest, DisplayedProductsUnderBothLabelings) {
  auto a = s.unit_vector(1, 1), b = s.unit_vector(0, 1);
  EXPECT_TRUE(s.is_zero(s.mul(a, b)));
  EXPECT_TRUE(s.is_zero(s.mul(a, s.alpha(b))));
  EXPECT_EQ(s.mul(b, s.alpha(a)), b);
}

TEST_F(ShiftRingTest, ShiftIsARingHomomorphism) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    auto x = random_element(rng), y = random_element(rng);
    ASSERT_EQ(s.alpha(s.mul(x, y)), s.mul(s.alpha(x), s.alpha(y)));
    ASSERT_EQ(s.alpha(s.add(x, y)), s.add(s.alpha(x), s.alpha(y)));
    ASSERT_TRUE(s.is_zero(s.add(x, s.neg(x))));
  }
}

TEST_F(ShiftRingTest, NotCompatibleOnASample) {
  std::vector<ShiftRing::Element> sample;
  for (long i = -2; i <= 2; ++i) sample.push_back(s.unit_vector(i, 1));
  auto w = compatibility_witness_on<ShiftRing::Element>(
      sample, [&](const auto& x, const auto& y) { return s.mul(x, y); },
      [&](const auto& x) { return s.is_zero(x); }, [&](const auto& x) { return s.alpha(x); });
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ(w->first, s.unit_vector(-2, 1));
  EXPECT_EQ(w->second, s.unit_vector(-2, 1));
}
