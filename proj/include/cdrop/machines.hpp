#pragma once

// W-machine and O-machine generative costs of computation sequences, and
// their minimum over admissible orderings.
//
// Every rule prices an atom from the *set* of atoms already in context, never
// from their order. That makes the minimum over orderings a shortest path over
// subsets, which is what `min_cost_over` computes.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cdrop/bits.hpp"
#include "cdrop/codecs.hpp"
#include "cdrop/errors.hpp"
#include "cdrop/event_model.hpp"

namespace cdrop {

struct AtomCost {
  Bits bits;
  std::string rule;
};

struct AtomCharge {
  DescriptionAtom atom;
  MachineKind machine;
  Bits bits;
  std::string rule;
};

struct CostBreakdown {
  std::vector<AtomCharge> per_atom;
  Bits total{0.0};
};

using Context = std::span<const DescriptionAtom* const>;

namespace detail {

inline Entity require_entity(const Scenario& s, const std::string& id) {
  auto e = s.find_entity(id);
  if (!e) throw Error(ErrorCode::UnresolvedReference, "entity '" + id + "'");
  return *e;
}

template <class T>
const T* payload_as(const DescriptionAtom* a) {
  return std::get_if<T>(&a->payload);
}

inline bool designated_in(Context ctx, const std::string& id) {
  for (const auto* a : ctx)
    if (const auto* d = payload_as<Designate>(a); d && d->entity == id) return true;
  return false;
}

inline bool explained_in(Context ctx, const DescriptionAtom& atom, const Scenario& s) {
  if (!atom.source_event) return false;
  for (const auto* a : ctx) {
    const auto* h = payload_as<HypothesisRef>(a);
    if (!h) continue;
    const auto* hyp = s.find_hypothesis(h->id);
    if (hyp && hyp->covers(*atom.source_event)) return true;
  }
  return false;
}

/// Places the O-machine may code relative to: localized places, homes of
/// designated entities, and the observer's home once the observer is known.
inline std::vector<Location> origins(Context ctx, const Scenario& s) {
  std::vector<Location> out;
  if (s.observer.is_ego) out.push_back(s.observer.home);
  for (const auto* a : ctx) {
    if (const auto* l = payload_as<Locate>(a)) out.push_back(l->where);
    else if (const auto* p = payload_as<PlaceAt>(a)) out.push_back(p->where);
    else if (const auto* d = payload_as<Designate>(a)) {
      if (d->as_observer) out.push_back(s.observer.home);
      if (auto e = s.find_entity(d->entity); e && e->home) out.push_back(*e->home);
    }
  }
  return out;
}

inline AtomCost observer_locate(const Location& where, Context ctx, const Scenario& s) {
  const Bits absolute = spatial_absolute(where, s.world, true);
  AtomCost best{absolute, where.prominence_rank ? "prominence" : "absolute"};
  for (const auto& origin : origins(ctx, s)) {
    const Bits rel = spatial_relative(where, origin) + where.reachability_penalty;
    if (rel < best.bits) best = {rel, "relative"};
  }
  return best;
}

inline Bits observer_designation_cost(const Scenario& s) {
  const Entity q = require_entity(s, s.observer.entity_id);
  if (q.prominence_rank) return rank_complexity(*q.prominence_rank);
  if (q.home && s.observer.ego_home) return person_by_distance_rank(q, *s.observer.ego_home, s.world);
  throw Error(ErrorCode::MissingObserverData, "third party '" + q.id + "' has neither rank nor home");
}

inline AtomCost designate_cost(const Designate& d, Context ctx, MachineKind machine, const Scenario& s) {
  const Entity e = require_entity(s, d.entity);
  if (machine == MachineKind::W) {
    if (d.as_observer) return {kZeroBits, "observer"};
    if (e.known_to_world) return {kZeroBits, "known"};
    if (e.prominence_rank) return {rank_complexity(*e.prominence_rank), "rank"};
    return {kZeroBits, "anonymous"};
  }
  if (designated_in(ctx, d.entity)) return {kZeroBits, "reuse"};
  if (d.entity == kEgoId && s.observer.is_ego) return {kZeroBits, "ego"};
  if (d.as_observer) {
    if (s.observer.is_ego) return {kZeroBits, "ego"};
    const Entity q = require_entity(s, s.observer.entity_id);
    return {observer_designation_cost(s), q.prominence_rank ? "observer-rank" : "observer-distance"};
  }
  for (const auto* a : ctx)
    if (const auto* in = payload_as<Instantiate>(a);
        in && !in->feature.is_numeral() && in->feature.literal_text() == d.entity)
      return {kZeroBits, "association"};
  if (e.prominence_rank) return {rank_complexity(*e.prominence_rank), "rank"};
  return {kZeroBits, "anonymous"};
}

inline AtomCost instantiate_cost(const Instantiate& in, Context ctx, MachineKind machine, const Scenario& s) {
  const auto& f = in.feature;
  if (machine == MachineKind::O) {
    const std::string text = f.literal_text();
    for (const auto* a : ctx) {
      if (const auto* other = payload_as<Instantiate>(a)) {
        if (other->feature.name == f.name && other->feature.value == f.value) return {kZeroBits, "reuse"};
      }
    }
    for (const auto* a : ctx) {
      if (const auto* other = payload_as<Instantiate>(a)) {
        if (other->feature.is_numeral() == f.is_numeral() && other->feature.literal_text() == text)
          return {kZeroBits, "association"};
      } else if (const auto* d = payload_as<Designate>(a); d && !f.is_numeral() && d->entity == text) {
        return {kZeroBits, "association"};
      }
    }
  }
  const auto fc = feature_instantiation(f, machine, s.world.cost_model);
  return {fc.bits, std::string(fc.rule)};
}

inline AtomCost place_cost(const PlaceAt& p, Context ctx, MachineKind machine, const Scenario& s) {
  const Entity e = require_entity(s, p.entity);
  if (machine == MachineKind::O) {
    for (const auto* a : ctx)
      if (const auto* other = payload_as<PlaceAt>(a); other && other->entity != p.entity &&
                                                      same_cell(p.where, other->where))
        return {kZeroBits, "co-located"};
    return observer_locate(p.where, ctx, s);
  }
  const Bits absolute = spatial_absolute(p.where, s.world, true);
  AtomCost best{absolute, p.where.prominence_rank ? "prominence" : "absolute"};
  if (e.home) {
    const Bits from_home = spatial_relative(p.where, *e.home) + p.where.reachability_penalty;
    if (from_home < best.bits) best = {from_home, "from-home"};
  }
  if (e.kind == EntityKind::person && e.home) {
    for (const auto* a : ctx) {
      const auto* other = payload_as<PlaceAt>(a);
      if (!other || other->entity == p.entity || !same_cell(p.where, other->where)) continue;
      const Bits by_distance = person_by_distance_rank(e, p.where, s.world);
      if (by_distance < best.bits) best = {by_distance, "by-distance"};
      break;
    }
  }
  return best;
}

}  // namespace detail

/// Conditional cost of one atom given the atoms already generated.
inline AtomCost atom_cost(const DescriptionAtom& atom, Context context, MachineKind machine, const Scenario& s) {
  if (machine == MachineKind::W && !atom.is_hypothesis() && detail::explained_in(context, atom, s))
    return {kZeroBits, "explained"};

  return std::visit(
      [&](const auto& p) -> AtomCost {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Designate>) {
          return detail::designate_cost(p, context, machine, s);
        } else if constexpr (std::is_same_v<T, Instantiate>) {
          return detail::instantiate_cost(p, context, machine, s);
        } else if constexpr (std::is_same_v<T, Locate>) {
          if (machine == MachineKind::O) return detail::observer_locate(p.where, context, s);
          if (atom.source_event) {
            const auto* ev = s.find_event(*atom.source_event);
            if (ev) {
              if (auto density = s.density_of(*ev))
                return {density_localization(*density, p.where.resolution_a), "density"};
            }
          }
          return {spatial_absolute(p.where, s.world, false), "absolute"};
        } else if constexpr (std::is_same_v<T, Timestamp>) {
          AtomCost best{temporal_absolute(p.when, s.world), "absolute"};
          if (machine == MachineKind::W) return best;
          for (const auto* a : context)
            if (const auto* other = detail::payload_as<Timestamp>(a)) {
              const Bits rel = temporal_relative(p.when, other->when);
              if (rel < best.bits) best = {rel, "relative"};
            }
          return best;
        } else if constexpr (std::is_same_v<T, PlaceAt>) {
          return detail::place_cost(p, context, machine, s);
        } else {
          const auto* hyp = s.find_hypothesis(p.id);
          if (!hyp) throw Error(ErrorCode::UnresolvedReference, "hypothesis '" + p.id + "'");
          if (machine == MachineKind::O) return {kZeroBits, "not-needed"};
          return {hyp->credibility_cost + hyp->residual_total(), "hypothesis"};
        }
      },
      atom.payload);
}

/// Chain rule: each atom is priced given everything before it (and `pinned`).
inline CostBreakdown chain_cost(const ComputationSequence& seq, MachineKind machine, const Scenario& s,
                                std::span<const DescriptionAtom> pinned = {}) {
  std::vector<const DescriptionAtom*> ctx;
  ctx.reserve(pinned.size() + seq.atoms.size());
  for (const auto& a : pinned) ctx.push_back(&a);

  CostBreakdown out;
  for (const auto& atom : seq.atoms) {
    auto c = atom_cost(atom, ctx, machine, s);
    out.total += c.bits;
    out.per_atom.push_back({atom, machine, c.bits, std::move(c.rule)});
    ctx.push_back(&atom);
  }
  return out;
}

struct MinCost {
  Bits total{0.0};
  std::vector<std::size_t> order;  // indices into the atom table
  ComputationSequence sequence;
  CostBreakdown breakdown;

  std::optional<std::string> hypothesis_used() const {
    for (const auto& a : sequence.atoms)
      if (const auto* h = std::get_if<HypothesisRef>(&a.payload)) return h->id;
    return std::nullopt;
  }
};

inline constexpr std::size_t kMaxSearchAtoms = 16;
inline constexpr double kTieTolerance = 1e-9;

/// Minimum chain cost over every dependency-respecting ordering of the
/// `mandatory` atoms plus any subset of the `optional` ones, with `pinned`
/// atoms already in context. Ties go to the lexicographically first sequence
/// of atom indices.
inline MinCost min_cost_over(const std::vector<DescriptionAtom>& atoms, std::span<const std::size_t> pinned,
                             std::span<const std::size_t> mandatory, std::span<const std::size_t> optional,
                             MachineKind machine, const Scenario& s) {
  std::vector<std::size_t> usable(mandatory.begin(), mandatory.end());
  usable.insert(usable.end(), optional.begin(), optional.end());
  std::sort(usable.begin(), usable.end());
  usable.erase(std::unique(usable.begin(), usable.end()), usable.end());
  const std::size_t k = usable.size();
  if (k > kMaxSearchAtoms)
    throw Error(ErrorCode::TooManyAtoms,
                std::to_string(k) + " atoms exceed the search bound of " + std::to_string(kMaxSearchAtoms));

  std::vector<std::size_t> local_of(atoms.size(), k);
  for (std::size_t i = 0; i < k; ++i) local_of[usable[i]] = i;

  std::uint32_t required = 0;
  for (auto i : mandatory) required |= 1u << local_of[i];

  // Dependencies among usable atoms; pinned or absent ones are satisfied.
  const auto all_deps = atom_dependencies(atoms);
  std::vector<std::uint32_t> needs(k, 0);
  for (std::size_t i = 0; i < k; ++i)
    for (auto j : all_deps[usable[i]])
      if (local_of[j] < k) needs[i] |= 1u << local_of[j];

  const std::uint32_t states = 1u << k;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> to_go(states, inf);

  std::vector<const DescriptionAtom*> ctx;
  const auto load_context = [&](std::uint32_t mask) {
    ctx.clear();
    for (auto p : pinned) ctx.push_back(&atoms[p]);
    for (std::size_t i = 0; i < k; ++i)
      if (mask & (1u << i)) ctx.push_back(&atoms[usable[i]]);
  };

  for (std::uint32_t mask = states; mask-- > 0;) {
    double best = (mask & required) == required ? 0.0 : inf;
    load_context(mask);
    for (std::size_t i = 0; i < k; ++i) {
      const std::uint32_t bit = 1u << i;
      if ((mask & bit) || (needs[i] & ~mask)) continue;
      if (to_go[mask | bit] == inf) continue;
      const double c = atom_cost(atoms[usable[i]], ctx, machine, s).bits.value() + to_go[mask | bit];
      best = std::min(best, c);
    }
    to_go[mask] = best;
  }
  if (to_go[0] == inf) throw Error(ErrorCode::InvalidArgument, "no admissible sequence");

  MinCost out;
  std::uint32_t mask = 0;
  while (!((mask & required) == required && to_go[mask] <= kTieTolerance)) {
    load_context(mask);
    bool moved = false;
    for (std::size_t i = 0; i < k && !moved; ++i) {
      const std::uint32_t bit = 1u << i;
      if ((mask & bit) || (needs[i] & ~mask) || to_go[mask | bit] == inf) continue;
      const double c = atom_cost(atoms[usable[i]], ctx, machine, s).bits.value() + to_go[mask | bit];
      if (c <= to_go[mask] + kTieTolerance) {
        out.order.push_back(usable[i]);
        mask |= bit;
        moved = true;
      }
    }
    if (!moved) throw Error(ErrorCode::InvalidArgument, "failed to reconstruct optimal sequence");
  }

  for (auto i : out.order) out.sequence.atoms.push_back(atoms[i]);
  std::vector<DescriptionAtom> pinned_atoms;
  for (auto p : pinned) pinned_atoms.push_back(atoms[p]);
  out.breakdown = chain_cost(out.sequence, machine, s, pinned_atoms);
  out.total = out.breakdown.total;
  return out;
}

/// Index lists of the atom table split into the parts a machine must
/// generate and the hypotheses it may choose to entertain. The O-machine
/// never needs a hypothesis.
struct AtomPartition {
  std::vector<std::size_t> mandatory;
  std::vector<std::size_t> optional;
};

inline AtomPartition partition_atoms(const std::vector<DescriptionAtom>& atoms, MachineKind machine) {
  AtomPartition p;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (!atoms[i].is_hypothesis()) p.mandatory.push_back(i);
    else if (machine == MachineKind::W) p.optional.push_back(i);
  }
  return p;
}

inline MinCost min_cost(const Scenario& s, MachineKind machine) {
  const auto atoms = build_atoms(s);
  const auto part = partition_atoms(atoms, machine);
  return min_cost_over(atoms, {}, part.mandatory, part.optional, machine, s);
}

}  // namespace cdrop
