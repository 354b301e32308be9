#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cpb/classify.hpp"

namespace cpb {

inline constexpr int kReportSchemaVersion = 1;

enum class Outcome { kPass, kFail, kSkipped };

std::string to_string(Outcome o);

/// One check of a suite. Every bounded check names its bounds; `scope`
/// says how far the claim was verified ("verified to degree 6",
/// "exhaustive", "sampled").
struct CheckResult {
  std::string name;
  Outcome outcome = Outcome::kPass;
  std::map<std::string, std::int64_t> bounds;
  std::map<std::string, std::int64_t> metrics;
  std::string scope;
  std::string note;
  std::string counterexample;

  friend bool operator==(const CheckResult&, const CheckResult&) = default;
};

/// Overall status: "pass", "fail", "partial" (a cap was hit) or
/// "inapplicable" (a hypothesis of the suite does not hold for the input).
struct RunReport {
  int schema_version = kReportSchemaVersion;
  std::string tool = "cpbaer";
  std::string version;
  std::string command;  // classify | verify | mine
  std::string suite;
  std::string spec;     // canonical serialization
  std::string target;   // mine predicate
  std::map<std::string, std::int64_t> bounds;
  std::vector<PropertyReport> properties;
  std::vector<CheckResult> checks;
  std::vector<std::string> matches;  // mine: specs, aligned with `properties`
  std::string status = "pass";
  std::optional<double> seconds;

  friend bool operator==(const RunReport&, const RunReport&);
};

class ReportParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Pretty JSON, two-space indent, trailing newline. Stable key order.
std::string report_to_json(const RunReport& report);
/// Throws ReportParseError on malformed input or a schema version mismatch.
RunReport report_from_json(const std::string& text);

std::string property_report_to_json(const PropertyReport& report);
PropertyReport property_report_from_json(const std::string& text);

/// Human-readable summary.
std::string report_to_text(const RunReport& report);

/// 1 for "fail", otherwise 0.
int exit_code(const RunReport& report);

}  // namespace cpb
