#pragma once

// Scenario data model: entities, places, times, features, events, observer,
// causal hypotheses, and the description atoms a machine consumes.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cdrop/bits.hpp"
#include "cdrop/cost_model.hpp"
#include "cdrop/errors.hpp"

namespace cdrop {

inline constexpr std::string_view kEgoId = "ego";
inline constexpr std::size_t kMaxDigits = 17;

enum class EntityKind { person, monument, object, role };

/// A square localization cell of side `resolution_a` km centred on (x, y).
struct Location {
  std::string id;
  double x = 0.0;
  double y = 0.0;
  double resolution_a = 1.0;
  std::optional<std::int64_t> prominence_rank;
  Bits reachability_penalty{0.0};

  friend bool operator==(const Location&, const Location&) = default;
};

inline double distance(const Location& a, const Location& b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// True when `b` falls inside the cell of its own resolution around `a`.
inline bool same_cell(const Location& b, const Location& a) { return distance(a, b) < b.resolution_a; }

struct TimePoint {
  double t = 0.0;  // hours since the scenario epoch
  double resolution_tau = 1.0;

  friend bool operator==(const TimePoint&, const TimePoint&) = default;
};

struct Entity {
  std::string id;
  EntityKind kind = EntityKind::person;
  std::optional<std::int64_t> prominence_rank;
  std::optional<Location> home;
  bool known_to_world = false;

  friend bool operator==(const Entity&, const Entity&) = default;
};

struct DigitString {
  std::string digits;
  friend bool operator==(const DigitString&, const DigitString&) = default;
};

struct Category {
  std::string token;
  friend bool operator==(const Category&, const Category&) = default;
};

using FeatureLiteral = std::variant<std::uint64_t, DigitString, Category>;

struct FeatureValue {
  std::string name;
  FeatureLiteral value;
  std::uint64_t domain_size = 1;
  std::optional<std::uint64_t> likely_set_size;

  bool is_numeral() const { return !std::holds_alternative<Category>(value); }

  /// Decimal text for numerals, the token for categories.
  std::string literal_text() const {
    if (const auto* n = std::get_if<std::uint64_t>(&value)) return std::to_string(*n);
    if (const auto* d = std::get_if<DigitString>(&value)) return d->digits;
    return std::get<Category>(value).token;
  }

  friend bool operator==(const FeatureValue&, const FeatureValue&) = default;
};

struct EventDescription {
  std::string id;
  std::string kind;  // looked up in WorldModel::event_densities when non-empty
  std::vector<std::string> participants;
  std::vector<FeatureValue> features;
  std::optional<Location> location;
  std::optional<TimePoint> time;
  std::optional<double> occurrence_density;  // events per km^2
  /// Entities whose presence at `location` is part of the description.
  std::vector<std::string> present;
};

struct Observer {
  bool is_ego = true;
  std::string entity_id{kEgoId};  // the third party when !is_ego
  Location home;
  /// Ego's own home; lets a rank-less third party be designated by distance.
  std::optional<Location> ego_home;

  static Observer ego(Location home) {
    Observer o;
    o.home = std::move(home);
    return o;
  }
  static Observer third_party(std::string id, Location home) {
    Observer o;
    o.is_ego = false;
    o.entity_id = std::move(id);
    o.home = std::move(home);
    return o;
  }
};

struct CausalHypothesis {
  std::string id;
  Bits credibility_cost{0.0};
  std::vector<std::string> explains;
  std::map<std::string, Bits> residual_costs;

  bool covers(std::string_view event_id) const {
    return std::find(explains.begin(), explains.end(), event_id) != explains.end();
  }
  Bits residual_total() const {
    Bits sum{0.0};
    for (const auto& [id, bits] : residual_costs) sum += bits;
    return sum;
  }
};

struct WorldModel {
  double area_S = 1.0;          // km^2
  double time_window_T = 24.0;  // hours
  double population_density_rho = 1.0;
  std::map<std::string, double> event_densities;
  std::map<std::string, std::vector<std::string>> celebrity_lists;
  std::vector<Entity> entities;
  InstructionCostModel cost_model;
};

struct Scenario {
  WorldModel world;
  std::vector<EventDescription> events;
  Observer observer;
  std::vector<CausalHypothesis> hypotheses;

  /// Resolves an entity id. "ego" resolves to the observer when the observer
  /// is ego, unless the world defines it explicitly.
  std::optional<Entity> find_entity(std::string_view id) const {
    for (const auto& e : world.entities)
      if (e.id == id) return e;
    if (id == kEgoId && observer.is_ego)
      return Entity{std::string(kEgoId), EntityKind::person, std::nullopt, observer.home, true};
    return std::nullopt;
  }

  const EventDescription* find_event(std::string_view id) const {
    for (const auto& e : events)
      if (e.id == id) return &e;
    return nullptr;
  }

  const CausalHypothesis* find_hypothesis(std::string_view id) const {
    for (const auto& h : hypotheses)
      if (h.id == id) return &h;
    return nullptr;
  }

  /// Spatial density of the event's kind, explicit density first.
  std::optional<double> density_of(const EventDescription& e) const {
    if (e.occurrence_density) return e.occurrence_density;
    if (!e.kind.empty()) {
      if (auto it = world.event_densities.find(e.kind); it != world.event_densities.end()) return it->second;
    }
    return std::nullopt;
  }
};

// ---------------------------------------------------------------------------
// Validation

struct Violation {
  std::string field;
  std::string message;

  friend auto operator<=>(const Violation&, const Violation&) = default;
};

namespace detail {

inline bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

inline void check_location(const Location& loc, const std::string& field, const WorldModel& w,
                           std::vector<Violation>& out) {
  if (!std::isfinite(loc.x) || !std::isfinite(loc.y)) out.push_back({field, "coordinates must be finite"});
  if (!positive_finite(loc.resolution_a)) {
    out.push_back({field + ".resolution_a", "must be > 0"});
  } else if (loc.resolution_a * loc.resolution_a > w.area_S) {
    out.push_back({field + ".resolution_a", "cell larger than world area"});
  }
  if (loc.prominence_rank && *loc.prominence_rank < 1) out.push_back({field + ".prominence_rank", "must be >= 1"});
  if (!std::isfinite(loc.reachability_penalty.value()) || loc.reachability_penalty.value() < 0.0)
    out.push_back({field + ".reachability_penalty", "must be finite and >= 0"});
}

inline bool valid_digits(const std::string& s) {
  return !s.empty() && s.size() <= kMaxDigits &&
         std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace detail

/// Checks every structural invariant. Violations are keyed by ids rather than
/// positions, and returned sorted, so the result does not depend on event order.
inline std::vector<Violation> validate_scenario(const Scenario& s) {
  std::vector<Violation> out;
  const auto& w = s.world;

  if (!detail::positive_finite(w.area_S)) out.push_back({"world.area_S", "must be > 0"});
  if (!detail::positive_finite(w.time_window_T)) out.push_back({"world.time_window_T", "must be > 0"});
  if (!detail::positive_finite(w.population_density_rho))
    out.push_back({"world.population_density_rho", "must be > 0"});
  for (const auto& [kind, d] : w.event_densities)
    if (!detail::positive_finite(d)) out.push_back({"world.event_densities." + kind, "must be > 0"});
  if (!(w.cost_model.opcode_cost >= 0.0) || !std::isfinite(w.cost_model.opcode_cost))
    out.push_back({"world.cost_model.opcode_cost", "must be finite and >= 0"});
  if (w.cost_model.repeat_k_max < 2) out.push_back({"world.cost_model.repeat_k_max", "must be >= 2"});

  std::set<std::string> entity_ids;
  for (const auto& e : w.entities) {
    const std::string f = "world.entities[" + e.id + "]";
    if (e.id.empty()) out.push_back({"world.entities", "entity with empty id"});
    if (!entity_ids.insert(e.id).second) out.push_back({f, "duplicate entity id"});
    if (e.prominence_rank && *e.prominence_rank < 1) out.push_back({f + ".prominence_rank", "must be >= 1"});
    if (e.home) {
      if (e.kind != EntityKind::person) out.push_back({f + ".home", "only persons have homes"});
      detail::check_location(*e.home, f + ".home", w, out);
    }
  }
  for (const auto& [category, ids] : w.celebrity_lists)
    for (const auto& id : ids)
      if (!s.find_entity(id)) out.push_back({"world.celebrity_lists." + category, "unknown entity '" + id + "'"});

  if (s.events.empty()) out.push_back({"events", "at least one event required"});
  std::set<std::string> event_ids;
  for (const auto& ev : s.events) {
    const std::string f = "events[" + ev.id + "]";
    if (ev.id.empty()) out.push_back({"events", "event with empty id"});
    if (!event_ids.insert(ev.id).second) out.push_back({f, "duplicate event id"});

    for (const auto& p : ev.participants)
      if (!s.find_entity(p)) out.push_back({f + ".participants", "unknown entity '" + p + "'"});
    for (const auto& p : ev.present) {
      if (!s.find_entity(p)) out.push_back({f + ".present", "unknown entity '" + p + "'"});
      if (std::find(ev.participants.begin(), ev.participants.end(), p) == ev.participants.end())
        out.push_back({f + ".present", "'" + p + "' is not a participant"});
    }
    if (!ev.present.empty() && !ev.location) out.push_back({f + ".present", "presence requires a location"});

    std::set<std::string> names;
    for (const auto& feat : ev.features) {
      const std::string ff = f + ".features[" + feat.name + "]";
      if (!names.insert(feat.name).second) out.push_back({ff + ".name", "duplicate feature name"});
      if (feat.domain_size < 1) out.push_back({ff + ".domain_size", "must be >= 1"});
      if (feat.likely_set_size && (*feat.likely_set_size < 1 || *feat.likely_set_size > feat.domain_size))
        out.push_back({ff + ".likely_set_size", "must lie in [1, domain_size]"});
      if (const auto* d = std::get_if<DigitString>(&feat.value); d && !detail::valid_digits(d->digits))
        out.push_back({ff + ".value", "digit string must be 1-17 decimal digits"});
      if (const auto* n = std::get_if<std::uint64_t>(&feat.value);
          n && std::to_string(*n).size() > kMaxDigits)
        out.push_back({ff + ".value", "integer too large"});
    }

    if (ev.location) detail::check_location(*ev.location, f + ".location", w, out);
    if (ev.time) {
      if (!std::isfinite(ev.time->t)) out.push_back({f + ".time.t", "must be finite"});
      if (!detail::positive_finite(ev.time->resolution_tau))
        out.push_back({f + ".time.resolution_tau", "must be > 0"});
      else if (ev.time->resolution_tau > w.time_window_T)
        out.push_back({f + ".time.resolution_tau", "exceeds the time window"});
    }
    if (ev.occurrence_density && !detail::positive_finite(*ev.occurrence_density))
      out.push_back({f + ".occurrence_density", "must be > 0"});
    if (const auto d = s.density_of(ev); d && ev.location && detail::positive_finite(*d) &&
                                         ev.location->resolution_a * ev.location->resolution_a * *d > 1.0)
      out.push_back({f + ".occurrence_density", "a^2 * D exceeds 1"});
  }

  const auto& obs = s.observer;
  detail::check_location(obs.home, "observer.home", w, out);
  if (obs.ego_home) detail::check_location(*obs.ego_home, "observer.ego_home", w, out);
  if (!obs.is_ego) {
    const auto q = s.find_entity(obs.entity_id);
    if (!q) {
      out.push_back({"observer.identity", "unknown entity '" + obs.entity_id + "'"});
    } else if (!q->prominence_rank && !(q->home && obs.ego_home)) {
      out.push_back({"observer.identity", "third party needs a prominence rank, or a home plus observer.ego_home"});
    }
  }

  std::set<std::string> hyp_ids;
  for (const auto& h : s.hypotheses) {
    const std::string f = "hypotheses[" + h.id + "]";
    if (!hyp_ids.insert(h.id).second) out.push_back({f, "duplicate hypothesis id"});
    if (h.explains.empty()) out.push_back({f + ".explains", "must not be empty"});
    for (const auto& e : h.explains)
      if (!s.find_event(e)) out.push_back({f + ".explains", "unknown event '" + e + "'"});
    if (!std::isfinite(h.credibility_cost.value()) || h.credibility_cost.value() < 0.0)
      out.push_back({f + ".credibility_cost", "must be finite and >= 0"});
    for (const auto& [e, bits] : h.residual_costs) {
      if (!h.covers(e)) out.push_back({f + ".residual_costs." + e, "event not explained by hypothesis"});
      if (!std::isfinite(bits.value()) || bits.value() < 0.0)
        out.push_back({f + ".residual_costs." + e, "must be finite and >= 0"});
    }
  }

  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Description atoms

struct Designate {
  std::string entity;
  bool as_observer = false;
  friend bool operator==(const Designate&, const Designate&) = default;
};
struct Instantiate {
  FeatureValue feature;
  friend bool operator==(const Instantiate&, const Instantiate&) = default;
};
struct Locate {
  Location where;
  friend bool operator==(const Locate&, const Locate&) = default;
};
struct Timestamp {
  TimePoint when;
  friend bool operator==(const Timestamp&, const Timestamp&) = default;
};
struct PlaceAt {
  std::string entity;
  Location where;
  friend bool operator==(const PlaceAt&, const PlaceAt&) = default;
};
struct HypothesisRef {
  std::string id;
  friend bool operator==(const HypothesisRef&, const HypothesisRef&) = default;
};

using AtomPayload = std::variant<Designate, Instantiate, Locate, Timestamp, PlaceAt, HypothesisRef>;

struct DescriptionAtom {
  AtomPayload payload;
  std::optional<std::string> source_event;

  bool is_hypothesis() const { return std::holds_alternative<HypothesisRef>(payload); }

  friend bool operator==(const DescriptionAtom&, const DescriptionAtom&) = default;
};

struct ComputationSequence {
  std::vector<DescriptionAtom> atoms;
};

inline std::string label(const DescriptionAtom& atom) {
  const std::string ev = atom.source_event ? *atom.source_event : std::string{};
  return std::visit(
      [&](const auto& p) -> std::string {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Designate>) {
          return (p.as_observer ? "observer(" : "designate(") + p.entity + ")";
        } else if constexpr (std::is_same_v<T, Instantiate>) {
          return "instantiate(" + ev + "." + p.feature.name + "=" + p.feature.literal_text() + ")";
        } else if constexpr (std::is_same_v<T, Locate>) {
          return "locate(" + ev + ")";
        } else if constexpr (std::is_same_v<T, Timestamp>) {
          return "timestamp(" + ev + ")";
        } else if constexpr (std::is_same_v<T, PlaceAt>) {
          return "place(" + p.entity + "@" + ev + ")";
        } else {
          return "hypothesis(" + p.id + ")";
        }
      },
      atom.payload);
}

/// One atom per designation, feature, localization, presence and timestamp,
/// in scenario order: observer first, then events, then hypotheses. Each
/// entity is designated once, by the first event that mentions it. Ego needs
/// no designation, so only a third-party observer gets an atom.
inline std::vector<DescriptionAtom> build_atoms(const Scenario& s) {
  std::vector<DescriptionAtom> atoms;
  std::set<std::string> designated;

  if (!s.observer.is_ego) atoms.push_back({Designate{s.observer.entity_id, true}, std::nullopt});
  designated.insert(s.observer.entity_id);

  for (const auto& ev : s.events) {
    for (const auto& p : ev.participants)
      if (designated.insert(p).second) atoms.push_back({Designate{p, false}, ev.id});
    for (const auto& f : ev.features) atoms.push_back({Instantiate{f}, ev.id});
    if (ev.location) {
      if (ev.present.empty()) {
        atoms.push_back({Locate{*ev.location}, ev.id});
      } else {
        for (const auto& p : ev.present) atoms.push_back({PlaceAt{p, *ev.location}, ev.id});
      }
    }
    if (ev.time) atoms.push_back({Timestamp{*ev.time}, ev.id});
  }
  for (const auto& h : s.hypotheses) atoms.push_back({HypothesisRef{h.id}, std::nullopt});
  return atoms;
}

/// For each atom, the indices of atoms that must precede it: a presence
/// follows the designation of its entity and any localization of its place.
inline std::vector<std::vector<std::size_t>> atom_dependencies(const std::vector<DescriptionAtom>& atoms) {
  std::vector<std::vector<std::size_t>> deps(atoms.size());
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const auto* place = std::get_if<PlaceAt>(&atoms[i].payload);
    if (!place) continue;
    for (std::size_t j = 0; j < atoms.size(); ++j) {
      if (j == i) continue;
      if (const auto* d = std::get_if<Designate>(&atoms[j].payload); d && d->entity == place->entity)
        deps[i].push_back(j);
      if (const auto* l = std::get_if<Locate>(&atoms[j].payload); l && same_cell(place->where, l->where))
        deps[i].push_back(j);
    }
  }
  return deps;
}

inline constexpr std::size_t kDefaultEnumerationBound = 8;

/// Every dependency-respecting ordering of `atoms`, as index permutations in
/// lexicographic order.
inline std::vector<std::vector<std::size_t>> enumerate_orders(const std::vector<DescriptionAtom>& atoms,
                                                              std::size_t max_atoms = kDefaultEnumerationBound) {
  if (atoms.size() > max_atoms)
    throw Error(ErrorCode::TooManyAtoms,
                std::to_string(atoms.size()) + " atoms exceed the bound of " + std::to_string(max_atoms));
  const auto deps = atom_dependencies(atoms);
  std::vector<std::size_t> perm(atoms.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;

  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> position(atoms.size());
  do {
    for (std::size_t k = 0; k < perm.size(); ++k) position[perm[k]] = k;
    bool ok = true;
    for (std::size_t i = 0; i < atoms.size() && ok; ++i)
      for (auto j : deps[i])
        if (position[j] > position[i]) {
          ok = false;
          break;
        }
    if (ok) out.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

inline std::vector<ComputationSequence> enumerate_sequences(const std::vector<DescriptionAtom>& atoms,
                                                            std::size_t max_atoms = kDefaultEnumerationBound) {
  std::vector<ComputationSequence> out;
  for (const auto& order : enumerate_orders(atoms, max_atoms)) {
    ComputationSequence seq;
    seq.atoms.reserve(order.size());
    for (auto i : order) seq.atoms.push_back(atoms[i]);
    out.push_back(std::move(seq));
  }
  return out;
}

inline std::vector<ComputationSequence> enumerate_sequences(const Scenario& s,
                                                            std::size_t max_atoms = kDefaultEnumerationBound) {
  return enumerate_sequences(build_atoms(s), max_atoms);
}

}  // namespace cdrop
