#pragma once

// Scenario JSON reading, ScoreReport / explain JSON writing.
// The file layout is documented in docs/scenario_schema.md.

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cdrop/errors.hpp"
#include "cdrop/event_model.hpp"
#include "cdrop/machines.hpp"
#include "cdrop/unexpectedness.hpp"

namespace cdrop::io {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

class SchemaError : public Error {
 public:
  explicit SchemaError(std::vector<Violation> v)
      : Error(ErrorCode::SchemaViolation, summarize(v)), violations_(std::move(v)) {}

  SchemaError(std::string field, std::string message)
      : SchemaError(std::vector<Violation>{{std::move(field), std::move(message)}}) {}

  const std::vector<Violation>& violations() const { return violations_; }

 private:
  static std::string summarize(const std::vector<Violation>& v) {
    std::string out = std::to_string(v.size()) + " violation(s)";
    for (const auto& x : v) out += "\n  " + x.field + ": " + x.message;
    return out;
  }
  std::vector<Violation> violations_;
};

namespace detail {

class Reader {
 public:
  std::vector<Violation> problems;

  double number(const json& j, const char* key, const std::string& field, std::optional<double> fallback = {}) {
    if (!j.is_object() || !j.contains(key)) {
      if (fallback) return *fallback;
      problems.push_back({field + "." + key, "required number missing"});
      return 0.0;
    }
    if (!j.at(key).is_number()) {
      problems.push_back({field + "." + key, "must be a number"});
      return 0.0;
    }
    return j.at(key).get<double>();
  }

  std::optional<std::int64_t> opt_int(const json& j, const char* key, const std::string& field) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    if (!j.at(key).is_number_integer()) {
      problems.push_back({field + "." + key, "must be an integer"});
      return std::nullopt;
    }
    return j.at(key).get<std::int64_t>();
  }

  std::string string(const json& j, const char* key, const std::string& field, bool required = true) {
    if (!j.is_object() || !j.contains(key)) {
      if (required) problems.push_back({field + "." + key, "required string missing"});
      return {};
    }
    if (!j.at(key).is_string()) {
      problems.push_back({field + "." + key, "must be a string"});
      return {};
    }
    return j.at(key).get<std::string>();
  }

  std::vector<std::string> strings(const json& j, const char* key, const std::string& field) {
    std::vector<std::string> out;
    if (!j.contains(key)) return out;
    const auto& arr = j.at(key);
    if (!arr.is_array()) {
      problems.push_back({field + "." + key, "must be an array of strings"});
      return out;
    }
    for (const auto& x : arr) {
      if (x.is_string()) out.push_back(x.get<std::string>());
      else problems.push_back({field + "." + key, "must be an array of strings"});
    }
    return out;
  }

  Location location(const json& j, const std::string& field, const std::map<std::string, Location>& named) {
    if (j.is_string()) {
      const auto id = j.get<std::string>();
      if (auto it = named.find(id); it != named.end()) return it->second;
      problems.push_back({field, "unknown location '" + id + "'"});
      return {};
    }
    if (!j.is_object()) {
      problems.push_back({field, "must be a location object or a location id"});
      return {};
    }
    Location loc;
    loc.id = string(j, "id", field, false);
    loc.x = number(j, "x", field);
    loc.y = number(j, "y", field);
    loc.resolution_a = number(j, "resolution_a", field);
    loc.prominence_rank = opt_int(j, "prominence_rank", field);
    loc.reachability_penalty = Bits(number(j, "reachability_penalty", field, 0.0));
    return loc;
  }

  FeatureValue feature(const json& j, const std::string& field) {
    FeatureValue f;
    f.name = string(j, "name", field);
    const int kinds = int(j.contains("digits")) + int(j.contains("integer")) + int(j.contains("category"));
    if (kinds != 1) {
      problems.push_back({field, "exactly one of digits, integer, category required"});
      return f;
    }
    if (j.contains("digits")) {
      f.value = DigitString{string(j, "digits", field)};
    } else if (j.contains("integer")) {
      if (!j.at("integer").is_number_unsigned()) problems.push_back({field + ".integer", "must be a non-negative integer"});
      else f.value = j.at("integer").get<std::uint64_t>();
    } else {
      f.value = Category{string(j, "category", field)};
      if (!j.contains("domain_size")) problems.push_back({field + ".domain_size", "required for categories"});
    }
    if (auto d = opt_int(j, "domain_size", field)) {
      if (*d < 1) problems.push_back({field + ".domain_size", "must be >= 1"});
      else f.domain_size = static_cast<std::uint64_t>(*d);
    }
    if (auto l = opt_int(j, "likely_set_size", field)) {
      if (*l < 1) problems.push_back({field + ".likely_set_size", "must be >= 1"});
      else f.likely_set_size = static_cast<std::uint64_t>(*l);
    }
    return f;
  }
};

inline EntityKind entity_kind(const std::string& s, const std::string& field, std::vector<Violation>& problems) {
  if (s == "person") return EntityKind::person;
  if (s == "monument") return EntityKind::monument;
  if (s == "object") return EntityKind::object;
  if (s == "role") return EntityKind::role;
  problems.push_back({field + ".kind", "must be person, monument, object or role"});
  return EntityKind::person;
}

}  // namespace detail

/// Builds a Scenario; throws SchemaError listing every problem found, both
/// structural (missing keys, wrong types) and invariant violations.
inline Scenario parse_scenario(const json& root) {
  detail::Reader rd;
  Scenario s;
  if (!root.is_object()) throw SchemaError("$", "scenario must be a JSON object");
  for (const char* key : {"world", "events", "observer"})
    if (!root.contains(key)) rd.problems.push_back({key, "required key missing"});
  if (!rd.problems.empty()) throw SchemaError(rd.problems);

  const auto& jw = root.at("world");
  auto& w = s.world;
  w.area_S = rd.number(jw, "area_S", "world");
  w.time_window_T = rd.number(jw, "time_window_T", "world");
  w.population_density_rho = rd.number(jw, "population_density_rho", "world", 1.0);
  if (jw.contains("event_densities")) {
    for (const auto& [kind, d] : jw.at("event_densities").items()) {
      if (d.is_number()) w.event_densities[kind] = d.get<double>();
      else rd.problems.push_back({"world.event_densities." + kind, "must be a number"});
    }
  }
  if (jw.contains("cost_model")) {
    const auto& cm = jw.at("cost_model");
    w.cost_model.opcode_cost = rd.number(cm, "opcode_cost", "world.cost_model", 2.0);
    w.cost_model.repeat_k_max = rd.opt_int(cm, "repeat_k_max", "world.cost_model").value_or(16);
  }

  std::map<std::string, Location> named;
  if (jw.contains("locations")) {
    for (const auto& [id, jl] : jw.at("locations").items()) {
      auto loc = rd.location(jl, "world.locations." + id, named);
      loc.id = id;
      named[id] = loc;
    }
  }
  if (jw.contains("entities")) {
    for (const auto& je : jw.at("entities")) {
      Entity e;
      e.id = rd.string(je, "id", "world.entities");
      const std::string field = "world.entities[" + e.id + "]";
      e.kind = detail::entity_kind(rd.string(je, "kind", field), field, rd.problems);
      e.prominence_rank = rd.opt_int(je, "prominence_rank", field);
      if (je.contains("home")) e.home = rd.location(je.at("home"), field + ".home", named);
      e.known_to_world = je.value("known_to_world", false);
      w.entities.push_back(std::move(e));
    }
  }
  if (jw.contains("celebrity_lists")) {
    for (const auto& [category, ids] : jw.at("celebrity_lists").items()) {
      std::vector<std::string> list;
      for (const auto& id : ids) {
        if (id.is_string()) list.push_back(id.get<std::string>());
        else rd.problems.push_back({"world.celebrity_lists." + category, "must list entity ids"});
      }
      // Position in a celebrity list is a prominence rank unless one is given.
      for (std::size_t i = 0; i < list.size(); ++i)
        for (auto& e : w.entities)
          if (e.id == list[i] && (!e.prominence_rank || *e.prominence_rank > static_cast<std::int64_t>(i + 1)))
            e.prominence_rank = static_cast<std::int64_t>(i + 1);
      w.celebrity_lists[category] = std::move(list);
    }
  }

  if (!root.at("events").is_array()) rd.problems.push_back({"events", "must be an array"});
  else {
    for (const auto& je : root.at("events")) {
      EventDescription ev;
      ev.id = rd.string(je, "id", "events");
      const std::string field = "events[" + ev.id + "]";
      ev.kind = rd.string(je, "kind", field, false);
      ev.participants = rd.strings(je, "participants", field);
      ev.present = rd.strings(je, "present", field);
      if (je.contains("features")) {
        for (const auto& jf : je.at("features")) ev.features.push_back(rd.feature(jf, field + ".features"));
      }
      if (je.contains("location")) ev.location = rd.location(je.at("location"), field + ".location", named);
      if (je.contains("time")) {
        const auto& jt = je.at("time");
        ev.time = TimePoint{rd.number(jt, "t", field + ".time"), rd.number(jt, "resolution_tau", field + ".time")};
      }
      if (je.contains("occurrence_density")) ev.occurrence_density = rd.number(je, "occurrence_density", field);
      s.events.push_back(std::move(ev));
    }
  }

  const auto& jo = root.at("observer");
  if (!jo.is_object() || !jo.contains("identity") || !jo.contains("home")) {
    rd.problems.push_back({"observer", "identity and home required"});
  } else {
    const auto& id = jo.at("identity");
    if (id.is_string() && id.get<std::string>() == "ego") {
      s.observer.is_ego = true;
    } else if (id.is_object() && id.contains("third_party") && id.at("third_party").is_string()) {
      s.observer.is_ego = false;
      s.observer.entity_id = id.at("third_party").get<std::string>();
    } else {
      rd.problems.push_back({"observer.identity", "must be \"ego\" or {\"third_party\": <entity id>}"});
    }
    s.observer.home = rd.location(jo.at("home"), "observer.home", named);
    if (jo.contains("ego_home")) s.observer.ego_home = rd.location(jo.at("ego_home"), "observer.ego_home", named);
  }

  if (root.contains("hypotheses")) {
    for (const auto& jh : root.at("hypotheses")) {
      CausalHypothesis h;
      h.id = rd.string(jh, "id", "hypotheses");
      const std::string field = "hypotheses[" + h.id + "]";
      h.credibility_cost = Bits(rd.number(jh, "credibility_cost", field));
      h.explains = rd.strings(jh, "explains", field);
      if (jh.contains("residual_costs")) {
        for (const auto& [e, bits] : jh.at("residual_costs").items()) {
          if (bits.is_number()) h.residual_costs[e] = Bits(bits.get<double>());
          else rd.problems.push_back({field + ".residual_costs." + e, "must be a number"});
        }
      }
      s.hypotheses.push_back(std::move(h));
    }
  }

  if (!rd.problems.empty()) throw SchemaError(rd.problems);
  auto violations = validate_scenario(s);
  if (!violations.empty()) throw SchemaError(std::move(violations));
  return s;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw SchemaError("$", std::string("invalid JSON: ") + e.what());
  }
}

inline Scenario load_scenario(const std::string& path) { return parse_scenario(read_json_file(path)); }

// ---------------------------------------------------------------------------
// Output

/// Bit values are written with four decimals.
inline double round_bits(Bits b) {
  const double r = std::round(b.value() * 1e4) / 1e4;
  return r == 0.0 ? 0.0 : r;  // no "-0.0"
}

/// Probabilities keep four significant digits.
inline double round_probability(double p) {
  if (p <= 0.0) return p;
  const double scale = std::pow(10.0, 3 - std::floor(std::log10(p)));
  return std::round(p * scale) / scale;
}

inline ordered_json to_json(const CostBreakdown& b) {
  ordered_json rows = ordered_json::array();
  for (const auto& c : b.per_atom)
    rows.push_back({{"atom", label(c.atom)},
                    {"machine", std::string(to_string(c.machine))},
                    {"bits", round_bits(c.bits)},
                    {"rule", c.rule}});
  return {{"total", round_bits(b.total)}, {"per_atom", std::move(rows)}};
}

inline ordered_json to_json(const ScoreReport& r) {
  ordered_json j;
  j["U"] = round_bits(r.U);
  j["Cw"] = round_bits(r.Cw);
  j["C"] = round_bits(r.C);
  if (r.cognitive_probability) j["cognitive_probability"] = round_probability(*r.cognitive_probability);
  j["hypothesis_used"] = r.hypothesis_used ? ordered_json(*r.hypothesis_used) : ordered_json(nullptr);
  if (r.eq3_bound) j["eq3_bound"] = round_bits(*r.eq3_bound);
  j["w_breakdown"] = to_json(r.w_breakdown);
  j["o_breakdown"] = to_json(r.o_breakdown);
  return j;
}

/// Per-atom table with both machines' charges taken from their own optimal
/// sequences, plus those sequences in order.
inline ordered_json explain_json(const Scenario& s, const ScoreReport& r) {
  const auto atoms = build_atoms(s);
  const auto find = [](const CostBreakdown& b, const DescriptionAtom& a) -> const AtomCharge* {
    for (const auto& c : b.per_atom)
      if (c.atom == a) return &c;
    return nullptr;
  };
  ordered_json rows = ordered_json::array();
  for (const auto& a : atoms) {
    ordered_json row;
    row["atom"] = label(a);
    const auto* w = find(r.w_breakdown, a);
    const auto* o = find(r.o_breakdown, a);
    row["W_bits"] = w ? ordered_json(round_bits(w->bits)) : ordered_json(nullptr);
    row["W_rule"] = w ? ordered_json(w->rule) : ordered_json("omitted");
    row["O_bits"] = o ? ordered_json(round_bits(o->bits)) : ordered_json(nullptr);
    row["O_rule"] = o ? ordered_json(o->rule) : ordered_json("omitted");
    rows.push_back(std::move(row));
  }
  ordered_json w_seq = ordered_json::array();
  for (const auto& c : r.w_breakdown.per_atom) w_seq.push_back(label(c.atom));
  ordered_json o_seq = ordered_json::array();
  for (const auto& c : r.o_breakdown.per_atom) o_seq.push_back(label(c.atom));

  ordered_json j;
  j["atoms"] = std::move(rows);
  j["w_sequence"] = std::move(w_seq);
  j["o_sequence"] = std::move(o_seq);
  j["hypothesis_used"] = r.hypothesis_used ? ordered_json(*r.hypothesis_used) : ordered_json(nullptr);
  j["U"] = round_bits(r.U);
  j["Cw"] = round_bits(r.Cw);
  j["C"] = round_bits(r.C);
  return j;
}

}  // namespace cdrop::io
