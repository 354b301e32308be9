#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cpb/classify.hpp"
#include "cpb/report.hpp"
#include "cpb/spec.hpp"

namespace cpb {

/// Bad command-line input that is not a spec syntax error: unknown suite,
/// unknown flag, malformed predicate.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string tool_version();

/// Bounds left unset take the suite default (see suite_defaults).
struct RunOptions {
  std::optional<unsigned> bound_n;
  std::optional<unsigned> bound_d;
  std::optional<unsigned> window;
  std::size_t order_cap = 1024;
  std::size_t brute_limit = std::size_t{1} << 16;  // B: brute-force comparisons up to this many candidates
  std::uint64_t seed = 0;
  std::optional<std::string> cache_dir;  // falls back to $CPBAER_CACHE_DIR; no caching if neither is set
  bool timing = false;
};

/// Canonical suite names, in the order listed by `--help`.
const std::vector<std::string>& suite_names();
/// Resolves a canonical name or an accepted alias.
std::optional<std::string> canonical_suite(const std::string& name);
/// One-line description of a canonical suite.
std::string suite_description(const std::string& suite);

/// The resolved bounds a suite reports, e.g. {N: 4, D: 6, B: 65536}.
std::map<std::string, std::int64_t> suite_bounds(const std::string& suite, const RunOptions& options);

/// Runs a suite on a spec. Throws SpecError or InputError on bad input;
/// a cap hit yields a report with status "partial".
RunReport run_suite(const std::string& suite, const std::string& spec_text, const RunOptions& options);
RunReport run_suite(const std::string& suite, const RingSpec& spec, const RunOptions& options);

/// File cache keyed by (tool version, canonical spec, suite, bounds).
class ReportCache {
 public:
  explicit ReportCache(std::string directory);
  /// The configured directory from options or the environment, if any.
  static std::optional<ReportCache> from_options(const RunOptions& options);

  static std::string key(const std::string& spec, const std::string& suite,
                         const std::map<std::string, std::int64_t>& bounds);
  std::string path_for(const std::string& key) const;
  std::optional<RunReport> load(const std::string& key) const;
  /// Writes to a temporary file and renames it into place.
  void store(const std::string& key, const RunReport& report) const;

 private:
  std::string dir_;
};

std::uint64_t fnv1a64(const std::string& data);

/// Boolean expressions over flag names: `!`, `&`, `|`, parentheses, and the
/// constants true/false. Skipped flags are unknown and propagate by
/// three-valued logic; only a definite true counts as a match.
class FlagPredicate {
 public:
  /// Throws InputError with the offending column.
  static FlagPredicate parse(const std::string& text);
  std::optional<bool> evaluate(const PropertyReport& report) const;
  const std::string& text() const { return text_; }

  struct Node;

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

RunReport run_mine(const std::string& family, const std::string& predicate, std::size_t max_order,
                   const RunOptions& options);

/// Plain-words definition of a flag or property name; nullopt if unknown.
std::optional<std::string> explain(const std::string& name);
/// Names accepted by explain.
std::vector<std::string> explainable_names();

}  // namespace cpb
