#pragma once

// Unexpectedness as a complexity drop, U = Cw - C, and the scores derived
// from it: coincidences, encounters, observer effects, causal filtering,
// cognitive probability, and two probability-based baselines.

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cdrop/bits.hpp"
#include "cdrop/errors.hpp"
#include "cdrop/event_model.hpp"
#include "cdrop/machines.hpp"

namespace cdrop {

struct ScoreReport {
  Bits U{0.0};
  Bits Cw{0.0};
  Bits C{0.0};
  CostBreakdown w_breakdown;
  CostBreakdown o_breakdown;
  std::optional<double> cognitive_probability;
  std::optional<std::string> hypothesis_used;
  /// Two-event scenarios only: Cw minus the O cost of generating the events
  /// in scenario order, C(e1) + C(e2|e1). Never above U.
  std::optional<Bits> eq3_bound;
};

/// p = 2^-U, defined only for U >= 0.
inline double cognitive_probability(Bits u) {
  if (u.value() < 0.0) throw Error(ErrorCode::UndefinedForNegativeU, std::to_string(u.value()));
  return std::exp2(-u.value());
}

/// Surprisal log2(1/p).
inline Bits shannon_baseline(double p) {
  if (!(p > 0.0 && p <= 1.0)) throw Error(ErrorCode::OutOfRange, "probability must lie in (0, 1]");
  return Bits(-std::log2(p));
}

/// Weaver's surprise index sum_j p_j^2 / p_i (0-based outcome index).
inline double weaver_baseline(std::span<const double> p, std::size_t i) {
  if (i >= p.size()) throw Error(ErrorCode::OutOfRange, "outcome index");
  double sum = 0.0;
  double squares = 0.0;
  for (double v : p) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw Error(ErrorCode::NotNormalized, "negative or non-finite entry");
    sum += v;
    squares += v * v;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw Error(ErrorCode::NotNormalized, "sum = " + std::to_string(sum));
  if (!(p[i] > 0.0)) throw Error(ErrorCode::ZeroProbabilityOutcome, "p_i = 0");
  return squares / p[i];
}

namespace detail {

inline void require_valid(const Scenario& s) {
  const auto violations = validate_scenario(s);
  if (!violations.empty())
    throw Error(ErrorCode::SchemaViolation, violations.front().field + ": " + violations.front().message);
}

/// Differences below this are rounding noise from summing the same terms in
/// different orders.
inline constexpr double kZeroSnap = 1e-12;

inline ScoreReport make_report(const MinCost& w, const MinCost& o) {
  ScoreReport r;
  r.Cw = w.total;
  r.C = o.total;
  r.U = r.Cw - r.C;
  if (std::abs(r.U.value()) < kZeroSnap) r.U = kZeroBits;
  r.w_breakdown = w.breakdown;
  r.o_breakdown = o.breakdown;
  if (r.U.value() >= 0.0) r.cognitive_probability = cognitive_probability(r.U);
  r.hypothesis_used = w.hypothesis_used();
  return r;
}

/// Atom indices grouped by event; index 0 holds atoms without an event
/// (the observer). Hypotheses are left out.
inline std::vector<std::vector<std::size_t>> event_blocks(const Scenario& s,
                                                          const std::vector<DescriptionAtom>& atoms) {
  std::vector<std::vector<std::size_t>> blocks(s.events.size() + 1);
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (atoms[i].is_hypothesis()) continue;
    if (!atoms[i].source_event) {
      blocks[0].push_back(i);
      continue;
    }
    for (std::size_t e = 0; e < s.events.size(); ++e)
      if (s.events[e].id == *atoms[i].source_event) blocks[e + 1].push_back(i);
  }
  return blocks;
}

inline std::vector<std::size_t> hypothesis_indices(const std::vector<DescriptionAtom>& atoms) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < atoms.size(); ++i)
    if (atoms[i].is_hypothesis()) out.push_back(i);
  return out;
}

}  // namespace detail

/// U(D) = Cw(D) - C(D), each side minimized independently.
inline ScoreReport unexpectedness(const Scenario& s) {
  detail::require_valid(s);
  const auto w = min_cost(s, MachineKind::W);
  const auto o = min_cost(s, MachineKind::O);
  return detail::make_report(w, o);
}

/// Cw - C(e1) - C(e2|e1): the O side follows scenario order (observer and
/// first event, then the second event given both), which can only cost more
/// than the O optimum.
inline Bits eq3_bound(const Scenario& s, Bits cw) {
  const auto atoms = build_atoms(s);
  const auto blocks = detail::event_blocks(s, atoms);
  std::vector<std::size_t> first = blocks[0];
  first.insert(first.end(), blocks[1].begin(), blocks[1].end());
  std::vector<std::size_t> rest;
  for (std::size_t b = 2; b < blocks.size(); ++b) rest.insert(rest.end(), blocks[b].begin(), blocks[b].end());

  const auto c1 = min_cost_over(atoms, {}, first, {}, MachineKind::O, s);
  const auto c2 = min_cost_over(atoms, first, rest, {}, MachineKind::O, s);
  return cw - c1.total - c2.total;
}

inline ScoreReport coincidence_score(const Scenario& s) {
  if (s.events.size() != 2)
    throw Error(ErrorCode::WrongEventCount, "coincidences relate exactly two events, got " +
                                                std::to_string(s.events.size()));
  auto report = unexpectedness(s);
  report.eq3_bound = eq3_bound(s, report.Cw);
  return report;
}

inline ScoreReport encounter_score(const Scenario& s) {
  bool encounter = false;
  for (const auto& ev : s.events) encounter = encounter || ev.present.size() >= 2;
  if (!encounter) throw Error(ErrorCode::NotAnEncounter, "no event places two entities at one location");
  return unexpectedness(s);
}

/// Same scoring; fails early when a third-party observer cannot be designated.
inline ScoreReport observer_adjusted(const Scenario& s) {
  if (!s.observer.is_ego) (void)detail::observer_designation_cost(s);
  return unexpectedness(s);
}

/// Hypotheses already compete inside the W minimum; this names the outcome.
inline ScoreReport causal_filter(const Scenario& s) { return unexpectedness(s); }

/// Unexpectedness of the split D1 * D2, where D1 is the observer plus the
/// first `split` events and D2 the remaining events.
struct SplitScores {
  Bits sequenced;    // Cw(D1) + Cw(D2|D1) - C(D1 u D2)
  Bits first;        // U(D1)
  Bits conditional;  // U(D2|D1), D1 pinned in context
};

inline SplitScores split_scores(const Scenario& s, std::size_t split) {
  detail::require_valid(s);
  if (split > s.events.size()) throw Error(ErrorCode::OutOfRange, "split beyond event count");
  const auto atoms = build_atoms(s);
  const auto blocks = detail::event_blocks(s, atoms);
  const auto hyps = detail::hypothesis_indices(atoms);

  std::vector<std::size_t> d1 = blocks[0];
  for (std::size_t b = 1; b <= split; ++b) d1.insert(d1.end(), blocks[b].begin(), blocks[b].end());
  std::vector<std::size_t> d2;
  for (std::size_t b = split + 1; b < blocks.size(); ++b) d2.insert(d2.end(), blocks[b].begin(), blocks[b].end());
  std::vector<std::size_t> all = d1;
  all.insert(all.end(), d2.begin(), d2.end());

  const auto w1 = min_cost_over(atoms, {}, d1, hyps, MachineKind::W, s);
  std::vector<std::size_t> w_pinned = d1;
  std::vector<std::size_t> w_optional;
  for (auto h : hyps) {
    if (std::find(w1.order.begin(), w1.order.end(), h) != w1.order.end()) w_pinned.push_back(h);
    else w_optional.push_back(h);
  }
  const auto w2 = min_cost_over(atoms, w_pinned, d2, w_optional, MachineKind::W, s);
  const auto o1 = min_cost_over(atoms, {}, d1, {}, MachineKind::O, s);
  const auto o2 = min_cost_over(atoms, d1, d2, {}, MachineKind::O, s);
  const auto o_all = min_cost_over(atoms, {}, all, {}, MachineKind::O, s);

  return {w1.total + w2.total - o_all.total, w1.total - o1.total, w2.total - o2.total};
}

}  // namespace cdrop
