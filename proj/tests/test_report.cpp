#include <gtest/gtest.h>

#include <random>

#include "cpb/classify.hpp"
#include "cpb/report.hpp"
#include "helpers.hpp"

using namespace cpb;

namespace {

CheckResult random_check(std::mt19937_64& rng, int i) {
  CheckResult c;
  c.name = "check " + std::to_string(i);
  c.outcome = static_cast<Outcome>(rng() % 3);
  if (rng() & 1) c.bounds["N"] = static_cast<std::int64_t>(rng() % 10);
  if (rng() & 1) c.bounds["B"] = std::int64_t{1} << 40;
  if (rng() & 1) c.metrics["checked"] = -static_cast<std::int64_t>(rng() % 1000);
  if (rng() & 1) c.scope = "verified to degree 6";
  if (rng() & 1) c.note = "note with \"quotes\" and\nnewline";
  if (rng() & 1) c.counterexample = "e = 1 + x";
  return c;
}

RunReport random_report(std::mt19937_64& rng, const std::vector<RingPtr>& rings) {
  RunReport r;
  r.version = "0.1.0";
  r.command = (rng() & 1) ? "verify" : "classify";
  r.suite = "poly-transfer";
  r.spec = "ring: upper_triangular 2 (zmod 2)\nalpha: identity\n";
  if (rng() & 1) r.target = "abelian & !prime";
  r.bounds = {{"N", 4}, {"D", 6}};
  int checks = static_cast<int>(rng() % 5);
  for (int i = 0; i < checks; ++i) r.checks.push_back(random_check(rng, i));
  int props = static_cast<int>(rng() % 3);
  for (int i = 0; i < props; ++i) {
    const auto& ring = rings[rng() % rings.size()];
    ClassifyOptions opts;
    if (rng() & 1) opts.order_cap = 8;  // partial reports with skipped flags
    r.properties.push_back(classify(*ring, opts));
    if (rng() & 1) r.matches.push_back(ring->provenance());
  }
  static const char* statuses[] = {"pass", "fail", "partial", "inapplicable"};
  r.status = statuses[rng() % 4];
  if (rng() & 1) r.seconds = 0.25;
  return r;
}

}  // namespace

TEST(ReportJson, RoundTripProperty) {
  std::mt19937_64 rng(808);
  auto rings = testing_support::small_corpus(32);
  for (int trial = 0; trial < 200; ++trial) {
    RunReport r = random_report(rng, rings);
    std::string json = report_to_json(r);
    RunReport back = report_from_json(json);
    ASSERT_EQ(back, r) << json;
    ASSERT_EQ(report_to_json(back), json);
  }
}

TEST(ReportJson, PropertyReportRoundTrip) {
  for (const auto& ring : testing_support::small_corpus(16)) {
    auto p = classify(*ring);
    EXPECT_EQ(property_report_from_json(property_report_to_json(p)), p) << ring->provenance();
  }
}

TEST(ReportJson, StableKeyOrderAndTrailingNewline) {
  RunReport r;
  r.version = "0.1.0";
  r.command = "classify";
  r.suite = "classify";
  r.spec = "zmod 6";
  std::string json = report_to_json(r);
  EXPECT_EQ(json.back(), '\n');
  EXPECT_LT(json.find("\"schema_version\""), json.find("\"tool\""));
  EXPECT_LT(json.find("\"spec\""), json.find("\"status\""));
  EXPECT_LT(json.find("\"status\""), json.find("\"checks\""));
  EXPECT_EQ(json.find("\"seconds\""), std::string::npos);
}

TEST(ReportJson, SchemaMismatchIsRejected) {
  RunReport r;
  r.version = "0.1.0";
  std::string json = report_to_json(r);
  auto pos = json.find("\"schema_version\": 1");
  ASSERT_NE(pos, std::string::npos);
  json.replace(pos, 19, "\"schema_version\": 2");
  EXPECT_THROW(report_from_json(json), ReportParseError);
  EXPECT_THROW(report_from_json("{not json"), ReportParseError);
  EXPECT_THROW(report_from_json("[]"), ReportParseError);
}

TEST(ReportText, SummaryLines) {
  RunReport r;
  r.version = "0.1.0";
  r.command = "verify";
  r.suite = "poly-transfer";
  r.spec = "zmod 6";
  r.bounds = {{"N", 4}};
  CheckResult c;
  c.name = "coefficients lie in R e0 R";
  c.scope = "exhaustive";
  c.metrics = {{"checked", 4}};
  r.checks.push_back(c);
  std::string text = report_to_text(r);
  EXPECT_NE(text.find("cpbaer 0.1.0: verify poly-transfer\n"), std::string::npos);
  EXPECT_NE(text.find("status: pass\n"), std::string::npos);
  EXPECT_NE(text.find("[pass] coefficients lie in R e0 R (exhaustive)\n"), std::string::npos);
  EXPECT_NE(text.find("checked=4"), std::string::npos);

  r.command = "classify";
  r.suite = "classify";
  EXPECT_NE(report_to_text(r).find("cpbaer 0.1.0: classify\n"), std::string::npos);
}

TEST(ReportExit, OnlyFailuresExitNonzero) {
  RunReport r;
  for (const char* s : {"pass", "partial", "inapplicable"}) {
    r.status = s;
    EXPECT_EQ(exit_code(r), 0) << s;
  }
  r.status = "fail";
  EXPECT_EQ(exit_code(r), 1);
}
