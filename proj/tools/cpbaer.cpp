// Command-line front end: classify, verify <suite>, mine, explain <flag>.
// Exit codes: 0 all checks pass (or partial / inapplicable), 1 a check
// failed, 2 input error.

#include <fmt/format.h>

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cpb/corpus.hpp"
#include "cpb/errors.hpp"
#include "cpb/runner.hpp"
#include "cpb/spec.hpp"

namespace {

constexpr int kInputError = 2;

struct Common {
  cpb::RunOptions options;
  std::string format = "json";
  unsigned bound_n = 0, bound_d = 0, window = 0;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--bound-n", c.bound_n, "Enumeration bound N (suite default when omitted)");
  cmd->add_option("--bound-d", c.bound_d, "Verification degree D (default 6)");
  cmd->add_option("--window", c.window, "Laurent window half-width W (default 3)");
  cmd->add_option("--order-cap", c.options.order_cap, "Largest ring order to build and classify")
      ->capture_default_str();
  cmd->add_option("--brute-limit", c.options.brute_limit, "Brute-force comparison budget B")->capture_default_str();
  cmd->add_option("--cache-dir", c.options.cache_dir, "Report cache directory (overrides CPBAER_CACHE_DIR)");
  cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "text"}))->capture_default_str();
  cmd->add_option("--seed", c.options.seed, "Seed for sampled checks")->capture_default_str();
  cmd->add_flag("--timing", c.options.timing, "Include wall-clock seconds in the report");
}

void finalize(CLI::App* cmd, Common& c) {
  if (cmd->count("--bound-n")) c.options.bound_n = c.bound_n;
  if (cmd->count("--bound-d")) c.options.bound_d = c.bound_d;
  if (cmd->count("--window")) c.options.window = c.window;
}

// A spec argument is either the spec text, "-" for stdin, or @path.
std::string read_spec(const std::string& arg) {
  auto slurp = [](std::istream& in) {
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  if (arg == "-") return slurp(std::cin);
  if (!arg.empty() && arg[0] == '@') {
    std::ifstream in(arg.substr(1));
    if (!in) throw cpb::InputError("cannot read spec file '" + arg.substr(1) + "'");
    return slurp(in);
  }
  return arg;
}

int emit(const cpb::RunReport& report, const Common& c) {
  std::cout << (c.format == "json" ? cpb::report_to_json(report) : cpb::report_to_text(report));
  return cpb::exit_code(report);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-ring classifier and bounded verifier for cP-Baer transfer results"};
  app.require_subcommand(1);
  app.set_version_flag("--version", cpb::tool_version());

  Common common;

  std::string classify_spec;
  auto* classify = app.add_subcommand("classify", "Classify a ring and report its flags");
  classify->add_option("spec", classify_spec, "Ring spec, '-' for stdin, or @file")->required();
  add_common(classify, common);

  std::string suite, verify_spec;
  std::string suite_help = "Suite:";
  for (const auto& s : cpb::suite_names()) suite_help += "\n  " + s + ": " + cpb::suite_description(s);
  auto* verify = app.add_subcommand("verify", "Run a verification suite on a spec");
  verify->add_option("suite", suite, suite_help)->required();
  verify->add_option("spec", verify_spec, "Spec, '-' for stdin, or @file (optional for shift-example)");
  add_common(verify, common);

  std::string family, predicate;
  std::size_t max_order = 64;
  std::string family_help = "Family:";
  for (const auto& f : cpb::mine_families()) family_help += " " + f;
  auto* mine = app.add_subcommand("mine", "Classify every family instance and print those matching a predicate");
  mine->add_option("family", family, family_help)->required();
  mine->add_option("predicate", predicate, "Flag expression, e.g. \"right_cp_baer & !right_pq_baer\"")->required();
  mine->add_option("--max-order", max_order, "Largest ring order enumerated")->capture_default_str();
  add_common(mine, common);

  std::string flag;
  auto* explain = app.add_subcommand("explain", "Print the definition behind a flag");
  explain->add_option("flag", flag, "Flag or property name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  try {
    if (*explain) {
      auto text = cpb::explain(flag);
      if (!text) {
        std::string known;
        for (const auto& n : cpb::explainable_names()) known += " " + n;
        std::cerr << fmt::format("error: unknown flag '{}'; known:{}\n", flag, known);
        return kInputError;
      }
      std::cout << flag << ": " << *text << "\n";
      return 0;
    }
    if (*classify) {
      finalize(classify, common);
      return emit(cpb::run_suite("classify", read_spec(classify_spec), common.options), common);
    }
    if (*verify) {
      finalize(verify, common);
      return emit(cpb::run_suite(suite, read_spec(verify_spec), common.options), common);
    }
    if (*mine) {
      finalize(mine, common);
      return emit(cpb::run_mine(family, predicate, max_order, common.options), common);
    }
  } catch (const cpb::SpecError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const cpb::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
