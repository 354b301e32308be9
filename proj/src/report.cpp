#include "cpb/report.hpp"

#include <fmt/format.h>

#include <json.hpp>

namespace cpb {

using Json = nlohmann::ordered_json;

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::kPass: return "pass";
    case Outcome::kFail: return "fail";
    case Outcome::kSkipped: return "skipped";
  }
  return "?";
}

namespace {

Outcome outcome_from(const std::string& s) {
  if (s == "pass") return Outcome::kPass;
  if (s == "fail") return Outcome::kFail;
  if (s == "skipped") return Outcome::kSkipped;
  throw ReportParseError("unknown outcome '" + s + "'");
}

Verdict verdict_from(const std::string& s) {
  if (s == "true") return Verdict::kTrue;
  if (s == "false") return Verdict::kFalse;
  if (s == "skipped") return Verdict::kSkipped;
  throw ReportParseError("unknown verdict '" + s + "'");
}

Json int_map(const std::map<std::string, std::int64_t>& m) {
  Json j = Json::object();
  for (const auto& [k, v] : m) j[k] = v;
  return j;
}

std::map<std::string, std::int64_t> int_map_from(const Json& j) {
  std::map<std::string, std::int64_t> m;
  for (const auto& [k, v] : j.items()) m[k] = v.get<std::int64_t>();
  return m;
}

Json property_json(const PropertyReport& p) {
  Json j;
  j["ring"] = p.ring_id;
  j["order"] = p.order;
  j["partial"] = p.partial;
  j["idempotents"] = p.idempotents;
  j["left_semicentral"] = p.left_semicentral;
  j["right_semicentral"] = p.right_semicentral;
  j["central"] = p.central;
  j["radical"] = p.radical;
  Json flags = Json::object();
  // flag_names() fixes the order; anything extra follows alphabetically.
  for (const auto& name : flag_names()) {
    if (auto it = p.flags.find(name); it != p.flags.end()) flags[name] = to_string(it->second);
  }
  for (const auto& [name, v] : p.flags) {
    if (!flags.contains(name)) flags[name] = to_string(v);
  }
  j["flags"] = flags;
  Json cp = Json::array();
  for (const auto& [e, c] : p.cp_witness) cp.push_back({e, c});
  j["cp_witness"] = cp;
  Json ie = Json::array();
  for (const auto& [e, w] : p.i_ext_witness) ie.push_back({e, w.c, w.checked});
  j["i_extending_witness"] = ie;
  Json ce = Json::object();
  for (const auto& [flag, elems] : p.counterexamples) ce[flag] = elems;
  j["counterexamples"] = ce;
  return j;
}

PropertyReport property_from(const Json& j) {
  PropertyReport p;
  p.ring_id = j.at("ring").get<std::string>();
  p.order = j.at("order").get<std::size_t>();
  p.partial = j.at("partial").get<bool>();
  p.idempotents = j.at("idempotents").get<std::vector<Elem>>();
  p.left_semicentral = j.at("left_semicentral").get<std::vector<Elem>>();
  p.right_semicentral = j.at("right_semicentral").get<std::vector<Elem>>();
  p.central = j.at("central").get<std::vector<Elem>>();
  p.radical = j.at("radical").get<std::vector<Elem>>();
  for (const auto& [name, v] : j.at("flags").items()) p.flags[name] = verdict_from(v.get<std::string>());
  for (const auto& pair : j.at("cp_witness")) p.cp_witness[pair.at(0).get<Elem>()] = pair.at(1).get<Elem>();
  for (const auto& t : j.at("i_extending_witness")) {
    p.i_ext_witness[t.at(0).get<Elem>()] = IExtendingWitness{t.at(1).get<Elem>(), t.at(2).get<std::size_t>()};
  }
  for (const auto& [flag, elems] : j.at("counterexamples").items()) {
    p.counterexamples[flag] = elems.get<std::vector<Elem>>();
  }
  return p;
}

Json check_json(const CheckResult& c) {
  Json j;
  j["name"] = c.name;
  j["outcome"] = to_string(c.outcome);
  j["bounds"] = int_map(c.bounds);
  j["metrics"] = int_map(c.metrics);
  j["scope"] = c.scope;
  j["note"] = c.note;
  j["counterexample"] = c.counterexample;
  return j;
}

CheckResult check_from(const Json& j) {
  CheckResult c;
  c.name = j.at("name").get<std::string>();
  c.outcome = outcome_from(j.at("outcome").get<std::string>());
  c.bounds = int_map_from(j.at("bounds"));
  c.metrics = int_map_from(j.at("metrics"));
  c.scope = j.at("scope").get<std::string>();
  c.note = j.at("note").get<std::string>();
  c.counterexample = j.at("counterexample").get<std::string>();
  return c;
}

template <class F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw ReportParseError(e.what());
  }
}

}  // namespace

bool operator==(const RunReport& a, const RunReport& b) {
  return a.schema_version == b.schema_version && a.tool == b.tool && a.version == b.version &&
         a.command == b.command && a.suite == b.suite && a.spec == b.spec && a.target == b.target &&
         a.bounds == b.bounds && a.properties == b.properties && a.checks == b.checks && a.matches == b.matches &&
         a.status == b.status && a.seconds == b.seconds;
}

std::string report_to_json(const RunReport& r) {
  Json j;
  j["schema_version"] = r.schema_version;
  j["tool"] = r.tool;
  j["version"] = r.version;
  j["command"] = r.command;
  j["suite"] = r.suite;
  j["spec"] = r.spec;
  j["target"] = r.target;
  j["bounds"] = int_map(r.bounds);
  j["status"] = r.status;
  Json checks = Json::array();
  for (const auto& c : r.checks) checks.push_back(check_json(c));
  j["checks"] = checks;
  Json props = Json::array();
  for (const auto& p : r.properties) props.push_back(property_json(p));
  j["properties"] = props;
  j["matches"] = r.matches;
  if (r.seconds) j["seconds"] = *r.seconds;
  return j.dump(2) + "\n";
}

RunReport report_from_json(const std::string& text) {
  return guarded([&] {
    Json j = Json::parse(text);
    RunReport r;
    r.schema_version = j.at("schema_version").get<int>();
    if (r.schema_version != kReportSchemaVersion) {
      throw ReportParseError(fmt::format("unsupported schema version {}", r.schema_version));
    }
    r.tool = j.at("tool").get<std::string>();
    r.version = j.at("version").get<std::string>();
    r.command = j.at("command").get<std::string>();
    r.suite = j.at("suite").get<std::string>();
    r.spec = j.at("spec").get<std::string>();
    r.target = j.at("target").get<std::string>();
    r.bounds = int_map_from(j.at("bounds"));
    r.status = j.at("status").get<std::string>();
    for (const auto& c : j.at("checks")) r.checks.push_back(check_from(c));
    for (const auto& p : j.at("properties")) r.properties.push_back(property_from(p));
    r.matches = j.at("matches").get<std::vector<std::string>>();
    if (j.contains("seconds")) r.seconds = j.at("seconds").get<double>();
    return r;
  });
}

std::string property_report_to_json(const PropertyReport& report) { return property_json(report).dump(2) + "\n"; }

PropertyReport property_report_from_json(const std::string& text) {
  return guarded([&] { return property_from(Json::parse(text)); });
}

namespace {

std::string bounds_text(const std::map<std::string, std::int64_t>& b) {
  std::string out;
  for (const auto& [k, v] : b) out += fmt::format("{}{}={}", out.empty() ? "" : " ", k, v);
  return out;
}

std::string id_list(const std::vector<Elem>& v) {
  std::string out = "{";
  for (std::size_t i = 0; i < v.size(); ++i) out += fmt::format("{}{}", i ? ", " : "", v[i]);
  return out + "}";
}

void property_text(std::string& out, const PropertyReport& p) {
  out += fmt::format("ring: {} (order {}{})\n", p.ring_id, p.order, p.partial ? ", partial" : "");
  out += fmt::format("  idempotents: {}\n", id_list(p.idempotents));
  out += fmt::format("  central idempotents: {}\n", id_list(p.central));
  out += fmt::format("  radical size: {}\n", p.radical.size());
  for (const auto& name : flag_names()) {
    auto it = p.flags.find(name);
    if (it == p.flags.end()) continue;
    out += fmt::format("  {:<18} {}", name, to_string(it->second));
    if (auto ce = p.counterexamples.find(name); ce != p.counterexamples.end() && !ce->second.empty()) {
      out += fmt::format("  counterexample {}", id_list(ce->second));
    }
    out += "\n";
  }
}

}  // namespace

std::string report_to_text(const RunReport& r) {
  std::string out;
  bool show_suite = !r.suite.empty() && r.suite != r.command;
  out += fmt::format("{} {}: {}\n", r.tool, r.version, r.command + (show_suite ? " " + r.suite : ""));
  if (!r.spec.empty()) out += fmt::format("spec: {}\n", r.spec);
  if (!r.target.empty()) out += fmt::format("target: {}\n", r.target);
  if (!r.bounds.empty()) out += fmt::format("bounds: {}\n", bounds_text(r.bounds));
  out += fmt::format("status: {}\n", r.status);
  for (const auto& c : r.checks) {
    out += fmt::format("[{}] {}", to_string(c.outcome), c.name);
    if (!c.scope.empty()) out += fmt::format(" ({})", c.scope);
    out += "\n";
    if (!c.metrics.empty()) out += fmt::format("    {}\n", bounds_text(c.metrics));
    if (!c.note.empty()) out += fmt::format("    {}\n", c.note);
    if (!c.counterexample.empty()) out += fmt::format("    counterexample: {}\n", c.counterexample);
  }
  if (r.command == "mine") {
    out += fmt::format("matches: {}\n", r.matches.size());
    for (const auto& m : r.matches) out += "  " + m + "\n";
  } else {
    for (const auto& p : r.properties) property_text(out, p);
  }
  if (r.seconds) out += fmt::format("seconds: {:.3f}\n", *r.seconds);
  return out;
}

int exit_code(const RunReport& report) { return report.status == "fail" ? 1 : 0; }

}  // namespace cpb
