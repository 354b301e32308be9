#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "cpb/errors.hpp"
#include "cpb/spec.hpp"

using namespace cpb;

namespace {

SpecError parse_error(const std::string& text) {
  try {
    parse_spec(text);
  } catch (const SpecError& e) {
    return e;
  }
  ADD_FAILURE() << "no error for: " << text;
  return SpecError(0, 0, "none");
}

SpecError build_error(const std::string& text) {
  try {
    build_spec(parse_spec(text));
  } catch (const SpecError& e) {
    return e;
  }
  ADD_FAILURE() << "no error for: " << text;
  return SpecError(0, 0, "none");
}

// Random spec text. Only the grammar matters here, so the generated specs
// need not build.
class SpecGenerator {
 public:
  explicit SpecGenerator(std::uint64_t seed) : rng_(seed) {}

  std::string ring(int depth) {
    int pick = below(depth > 0 ? 7 : 2);
    switch (pick) {
      case 0: return "zmod " + num(2, 40);
      case 1: return "field " + std::string(below(2) ? "2" : "3") + " " + num(1, 4);
      case 2: return "product (" + ring(depth - 1) + ") (" + ring(depth - 1) + ")";
      case 3: return "matrix " + num(1, 3) + " (" + ring(depth - 1) + ")";
      case 4: return "upper_triangular " + num(1, 4) + " (" + ring(depth - 1) + ")";
      case 5: {
        static const char* fams[] = {"Tn", "S", "T", "A", "B"};
        return std::string("skew_triangular ") + fams[below(5)] + " " + num(2, 6) + " (" + ring(depth - 1) + ") " +
               morphism_atom(depth - 1);
      }
      default: return "quotient (" + ring(depth - 1) + ") " + ids();
    }
  }

  std::string morphism_atom(int depth) {
    switch (below(depth > 0 ? 6 : 4)) {
      case 0: return "identity";
      case 1: return "frobenius";
      case 2: return "swap";
      case 3: return "(table " + ids() + ")";
      case 4: return "(extend " + morphism_atom(depth - 1) + ")";
      default: return "(inverse " + morphism_atom(depth - 1) + ")";
    }
  }

  std::string delta() {
    switch (below(3)) {
      case 0: return "zero";
      case 1: return "inner " + num(0, 20);
      default: return "table " + ids();
    }
  }

  std::string monoid() {
    if (below(2)) {
      static const char* orders[] = {"lex", "revlex", "product"};
      unsigned rank = static_cast<unsigned>(below(3)) + 1;
      std::string s = "naturals " + std::to_string(rank) + " " + orders[below(3)] + " box";
      for (unsigned i = 0; i < rank; ++i) s += " " + num(0, 4);
      return s;
    }
    std::string s = "rationals support";
    int n = below(4) + 1;
    for (int i = 0; i < n; ++i) s += " " + num(0, 9) + "/" + num(1, 9);
    return s;
  }

  std::string spec() {
    if (below(3) == 0) return ring(2);
    std::string s = "ring: " + ring(2) + "\n";
    if (below(2)) s += "alpha: " + morphism_atom(2) + "\n";
    if (below(2)) s += "delta: " + delta() + "\n";
    if (below(2)) s += "monoid: " + monoid() + "\n";
    return s;
  }

 private:
  int below(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  std::string num(int lo, int hi) { return std::to_string(std::uniform_int_distribution<int>(lo, hi)(rng_)); }
  std::string ids() {
    std::string s = "[";
    int n = below(5);
    for (int i = 0; i < n; ++i) s += (i ? " " : "") + num(0, 15);
    return s + "]";
  }

  std::mt19937_64 rng_;
};

}  // namespace

TEST(SpecParse, DocumentedExamples) {
  auto z6 = build_spec(parse_spec("zmod 6"));
  EXPECT_EQ(z6.ring->order(), 6u);
  auto t = build_spec(parse_spec("skew_triangular T 2 (field 2 2) frobenius"));
  EXPECT_EQ(t.ring->order(), 16u);
  ASSERT_TRUE(t.triangular.has_value());
  EXPECT_EQ(t.triangular->family(), TriangularFamily::kConstantDiagonals);
  EXPECT_FALSE(t.triangular->sigma().is_identity());
  EXPECT_EQ(build_spec(parse_spec("product (zmod 2) (zmod 3)")).ring->order(), 6u);
}

TEST(SpecParse, KeyedFormWithComments) {
  auto spec = parse_spec(
      "# a commented spec\n"
      "ring: upper_triangular 2 (zmod 2)   # order 8\n"
      "\n"
      "alpha: identity\n"
      "delta: inner 2\n");
  ASSERT_TRUE(spec.alpha);
  ASSERT_TRUE(spec.delta.has_value());
  EXPECT_EQ(spec.delta->kind, DeltaExpr::Kind::kInner);
  EXPECT_EQ(spec.delta->element, 2);
  EXPECT_EQ(serialize(spec), "ring: upper_triangular 2 (zmod 2)\nalpha: identity\ndelta: inner 2\n");
  auto built = build_spec(spec);
  EXPECT_TRUE(built.delta.has_value());
  EXPECT_FALSE(built.delta->is_zero());
}

TEST(SpecParse, BareRingSerializesBare) {
  EXPECT_EQ(serialize(parse_spec("  product   (zmod 2)(zmod 3) ")), "product (zmod 2) (zmod 3)");
  EXPECT_EQ(serialize(parse_spec("ring: zmod 6\n")), "zmod 6");
}

TEST(SpecParse, Monoids) {
  auto s = parse_spec("ring: zmod 6\nmonoid: naturals 2 lex box 2 2\n");
  ASSERT_TRUE(s.monoid.has_value());
  EXPECT_EQ(s.monoid->box, (std::vector<unsigned>{2, 2}));
  auto q = parse_spec("ring: zmod 6\nmonoid: rationals support 0 2/4 1\n");
  ASSERT_TRUE(q.monoid.has_value());
  EXPECT_EQ(q.monoid->support[1], (std::pair<std::int64_t, std::int64_t>{1, 2}));
  auto built = build_spec(q);
  ASSERT_TRUE(built.monoid.has_value());
  EXPECT_EQ(built.monoid->support.size(), 3u);
}

TEST(SpecErrors, PositionsPointAtTheProblem) {
  auto e = parse_error("zmod");
  EXPECT_EQ(e.line(), 1u);
  EXPECT_EQ(e.column(), 5u);

  e = parse_error("frobnicate 3");
  EXPECT_EQ(e.column(), 1u);
  EXPECT_NE(std::string(e.what()).find("frobnicate"), std::string::npos);

  e = parse_error("product (zmod 2)");
  EXPECT_EQ(e.line(), 1u);
  EXPECT_EQ(e.column(), 17u);

  e = parse_error("ring: zmod 6\ncolour: red\n");
  EXPECT_EQ(e.line(), 2u);
  EXPECT_EQ(e.column(), 1u);

  e = parse_error("ring: zmod 6\nring: zmod 4\n");
  EXPECT_EQ(e.line(), 2u);

  e = parse_error("ring: zmod 6\nmonoid: naturals 2 sideways box 1 1\n");
  EXPECT_EQ(e.line(), 2u);
  EXPECT_EQ(e.column(), 20u);

  e = parse_error("zmod 6 7");
  EXPECT_EQ(e.column(), 8u);
}

TEST(SpecErrors, ValidationFailuresCarryTheirLocation) {
  auto e = build_error("ring: zmod 6\nalpha: (table [0 2 4 0 2 4])\n");
  EXPECT_EQ(e.line(), 2u);
  EXPECT_NE(std::string(e.what()).find("multiplicativity"), std::string::npos);

  e = build_error("ring: zmod 6\nalpha: frobenius\n");
  EXPECT_EQ(e.line(), 2u);
}

TEST(SpecErrors, QuotientByAWholeRingIsRejected) {
  EXPECT_THROW(build_spec(parse_spec("quotient (zmod 8) [1]")), SpecError);
  EXPECT_THROW(build_spec(parse_spec("quotient (zmod 8) [3]")), SpecError);
  EXPECT_EQ(build_spec(parse_spec("quotient (zmod 8) [4]")).ring->order(), 4u);
}

TEST(SpecErrors, CapIsNotASpecError) {
  EXPECT_THROW(build_spec(parse_spec("matrix 3 (zmod 2)"), 256), CapExceeded);
}

TEST(SpecRoundTrip, SerializeThenParseIsIdentity) {
  SpecGenerator gen(20240611);
  for (int trial = 0; trial < 2000; ++trial) {
    std::string text = gen.spec();
    RingSpec first = parse_spec(text);
    std::string canonical = serialize(first);
    RingSpec second = parse_spec(canonical);
    ASSERT_EQ(first, second) << text << "\n=> " << canonical;
    ASSERT_EQ(serialize(second), canonical) << text;
  }
}
