#include <gtest/gtest.h>

#include "cpb/classify.hpp"
#include "cpb/constructors.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace cpb;
using testing_support::ids;

namespace {

bool holds(const PropertyReport& r, const char* flag) { return r.flag(flag) == Verdict::kTrue; }

RingPtr dual_numbers_z2() { return testing_support::ring("skew_triangular T 2 (zmod 2) identity"); }

}  // namespace

TEST(Idempotents, SmallExamples) {
  EXPECT_EQ(idempotents(*make_zmod(6)).members(), ids({0, 1, 3, 4}));
  EXPECT_EQ(idempotents(*make_upper_triangular(*make_zmod(2), 2)).size(), 6u);
  EXPECT_EQ(idempotents(*testing_support::ring("skew_triangular T 2 (field 2 2) frobenius")).members(), ids({0, 1}));
}

TEST(Idempotents, SemicentralOnUpperTriangular) {
  // ids: e00 + 2 e01 + 4 e11. E11 = 1, E11 + E12 = 3, E22 = 4.
  auto r = make_upper_triangular(*make_zmod(2), 2);
  auto left = semicentral_idempotents(*r, Side::kLeft);
  auto right = semicentral_idempotents(*r, Side::kRight);
  EXPECT_TRUE(left.contains(1));
  EXPECT_TRUE(left.contains(3));
  EXPECT_FALSE(left.contains(4));
  EXPECT_TRUE(right.contains(4));
  EXPECT_FALSE(right.contains(1));
  EXPECT_EQ(central_idempotents(*r).members(), ids({0, 5}));
}

TEST(Flags, Z6) {
  auto rep = classify(*make_zmod(6));
  EXPECT_TRUE(holds(rep, "baer"));
  EXPECT_TRUE(holds(rep, "right_cp_baer"));
  EXPECT_TRUE(holds(rep, "semiprime"));
  EXPECT_FALSE(holds(rep, "prime"));
  EXPECT_EQ(rep.cp_witness.at(3), 4);
  EXPECT_EQ(rep.i_ext_witness.at(3).c, 3);
  EXPECT_EQ(rep.radical, ids({0}));
}

TEST(Flags, DualNumbersOverZ2) {
  auto rep = classify(*dual_numbers_z2());
  EXPECT_TRUE(holds(rep, "abelian"));
  EXPECT_FALSE(holds(rep, "reduced"));
  EXPECT_FALSE(holds(rep, "rickart"));
  EXPECT_FALSE(holds(rep, "semiprime"));
  EXPECT_EQ(rep.radical, ids({0, 2}));
}

TEST(Flags, MatricesOverZ2ArePrimeAndCpBaer) {
  auto rep = classify(*make_matrix(*make_zmod(2), 2));
  EXPECT_TRUE(holds(rep, "prime"));
  EXPECT_TRUE(holds(rep, "right_cp_baer"));
  EXPECT_TRUE(holds(rep, "left_cp_baer"));
  EXPECT_FALSE(holds(rep, "abelian"));
}

TEST(Radical, Examples) {
  EXPECT_EQ(prime_radical(*make_zmod(6)).members(), ids({0}));
  EXPECT_EQ(prime_radical(*make_zmod(4)).members(), ids({0, 2}));
  EXPECT_EQ(prime_radical(*make_zmod(8)).members(), ids({0, 2, 4, 6}));
  EXPECT_TRUE(is_semiprime(*make_zmod(6)));
  EXPECT_FALSE(is_prime(*make_zmod(6)));
  EXPECT_FALSE(is_semiprime(*make_zmod(4)));
  EXPECT_TRUE(is_prime(*make_zmod(5)));
}

TEST(CpBaer, WitnessAndFailure) {
  auto z6 = right_cp_baer(*make_zmod(6));
  EXPECT_TRUE(z6.holds);
  EXPECT_EQ(z6.witness.at(1), 0);
  EXPECT_EQ(z6.witness.at(0), 1);
  auto dual = right_cp_baer(*dual_numbers_z2());
  EXPECT_TRUE(dual.holds);  // only trivial idempotents
  auto ie = right_I_extending(*make_zmod(6));
  EXPECT_TRUE(ie.holds);
  EXPECT_EQ(ie.witness.at(3).c, 3);
  EXPECT_EQ(ie.witness.at(3).checked, 1u);
}

TEST(CpBaer, EquivalentCharacterizationsOnZ4) {
  auto eq = cp_baer_equivalences(*make_zmod(4));
  EXPECT_TRUE(eq.agree);
  for (Verdict v : eq.items) EXPECT_EQ(v, Verdict::kTrue);
}

TEST(CpBaer, CharacterizationsAgreeAcrossTheCorpus) {
  for (const auto& r : testing_support::small_corpus(64)) {
    auto eq = cp_baer_equivalences(*r);
    EXPECT_TRUE(eq.agree) << r->provenance() << ": " << eq.diagnostic;
    if (eq.items[0] != Verdict::kSkipped)
      EXPECT_EQ(eq.items[0] == Verdict::kTrue, right_cp_baer(*r).holds) << r->provenance();
  }
}

TEST(CpBaer, SemiprimeRingsAreCpBaerExactlyWhenIExtending) {
  std::size_t seen = 0;
  for (const auto& r : testing_support::small_corpus(256)) {
    auto rep = classify(*r);
    if (!holds(rep, "semiprime")) continue;
    ++seen;
    EXPECT_EQ(holds(rep, "right_cp_baer"), holds(rep, "right_I_extending")) << r->provenance();
  }
  EXPECT_GT(seen, 20u);
}

TEST(Classify, ReportsSatisfyTheirOwnImplications) {
  for (const auto& r : testing_support::small_corpus(256)) {
    auto v = report_invariant_violations(classify(*r));
    EXPECT_TRUE(v.empty()) << r->provenance() << ": " << (v.empty() ? "" : v.front());
  }
}

TEST(Classify, AgreesWithBruteForceDefinitions) {
  std::size_t rings = 0;
  for (const auto& r : testing_support::small_corpus(64)) {
    ++rings;
    auto rep = classify(*r);
    auto expect = oracle::flags(*r);
    for (const auto& [name, value] : expect) {
      ASSERT_NE(rep.flag(name), Verdict::kSkipped) << r->provenance() << " " << name;
      EXPECT_EQ(rep.flag(name) == Verdict::kTrue, value) << r->provenance() << " " << name;
    }
    EXPECT_EQ(rep.idempotents, oracle::idempotent_list(*r)) << r->provenance();
    EXPECT_EQ(rep.radical, oracle::members(oracle::prime_radical(*r))) << r->provenance();
  }
  EXPECT_GT(rings, 50u);
}

TEST(Classify, FlagNamesAreStable) {
  EXPECT_EQ(flag_names().size(), 15u);
  EXPECT_EQ(to_string(Verdict::kSkipped), "skipped");
}
