#pragma once

// Closed-form complexity estimators for the primitive quantities a scenario
// is built from: numerals, ranks, places, times, densities, and people
// ranked by distance.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "cdrop/bits.hpp"
#include "cdrop/cost_model.hpp"
#include "cdrop/errors.hpp"
#include "cdrop/event_model.hpp"

namespace cdrop {

enum class MachineKind { W, O };

constexpr std::string_view to_string(MachineKind m) { return m == MachineKind::W ? "W" : "O"; }

/// Cheapest program over {EMIT_DIGIT, COPY, REPEAT, POW10} that prints `s`.
///
/// Shortest path over string positions: COPY and REPEAT re-emit the previous
/// output digit, POW10 appends a run of zeros, and neither may start a program.
inline Bits digit_string_complexity(std::string_view s, const InstructionCostModel& m) {
  if (s.empty()) throw Error(ErrorCode::InvalidDigit, "empty digit string");
  if (s.size() > kMaxDigits) throw Error(ErrorCode::TooLong, std::string(s));
  for (char c : s)
    if (c < '0' || c > '9') throw Error(ErrorCode::InvalidDigit, std::string(s));

  const auto n = s.size();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> best(n + 1, inf);
  best[0] = 0.0;

  const double emit = m.emit_cost().value();
  const double copy = m.copy_cost().value();
  const double repeat = m.repeat_cost().value();
  const auto k_max = static_cast<std::size_t>(m.repeat_k_max);

  for (std::size_t i = 0; i < n; ++i) {
    if (best[i] == inf) continue;
    best[i + 1] = std::min(best[i + 1], best[i] + emit);
    if (i == 0) continue;

    const char prev = s[i - 1];
    std::size_t run = 0;
    while (i + run < n && s[i + run] == prev) ++run;
    if (run > 0) best[i + 1] = std::min(best[i + 1], best[i] + copy);
    for (std::size_t k = 1; k <= std::min(run, k_max); ++k) best[i + k] = std::min(best[i + k], best[i] + repeat);

    std::size_t zeros = 0;
    while (i + zeros < n && s[i + zeros] == '0') ++zeros;
    for (std::size_t e = 1; e <= zeros; ++e)
      best[i + e] = std::min(best[i + e], best[i] + m.pow10_cost(static_cast<std::int64_t>(e)).value());
  }
  return Bits(best[n]);
}

inline Bits integer_complexity(std::uint64_t n, const InstructionCostModel& m) {
  constexpr std::uint64_t kMax = 10'000'000'000'000'000ULL;
  if (n < 1 || n > kMax) throw Error(ErrorCode::OutOfRange, std::to_string(n));
  return digit_string_complexity(std::to_string(n), m);
}

/// Structural cost of an L-digit numeral whose digits are left open: one
/// uninstantiated EMIT followed by the cheapest mix of COPY and REPEAT.
inline Bits numeral_template_cost(std::size_t length, const InstructionCostModel& m) {
  if (length == 0) throw Error(ErrorCode::InvalidArgument, "numeral length must be >= 1");
  const auto k_max = static_cast<std::size_t>(m.repeat_k_max);
  std::vector<double> best(length, std::numeric_limits<double>::infinity());
  best[0] = 0.0;
  for (std::size_t j = 1; j < length; ++j) {
    best[j] = best[j - 1] + m.copy_cost().value();
    for (std::size_t k = 1; k <= std::min(j, k_max); ++k)
      best[j] = std::min(best[j], best[j - k] + m.repeat_cost().value());
  }
  return m.opcode() + Bits(best[length - 1]);
}

/// log2(rank + 1): rank 1 costs one bit, and doubling a large rank adds one.
inline Bits rank_complexity(std::int64_t rank) {
  if (rank < 1) throw Error(ErrorCode::InvalidArgument, "rank must be >= 1");
  return Bits(std::log2(static_cast<double>(rank) + 1.0));
}

/// Absolute localization of a cell in the world area, or through a landmark
/// rank when `use_prominence` and the place has one. Includes the place's
/// reachability penalty.
inline Bits spatial_absolute(const Location& loc, const WorldModel& w, bool use_prominence = true) {
  const double cell = loc.resolution_a * loc.resolution_a;
  if (!(loc.resolution_a > 0.0) || cell > w.area_S)
    throw Error(ErrorCode::ResolutionExceedsArea, "cell of side " + std::to_string(loc.resolution_a) + " km");
  if (use_prominence && loc.prominence_rank) return rank_complexity(*loc.prominence_rank) + loc.reachability_penalty;
  return Bits(std::log2(w.area_S / cell)) + loc.reachability_penalty;
}

/// Locating `b` among cells ranked by distance from `a`: log2(pi d^2 / a^2).
inline Bits spatial_relative(const Location& b, const Location& a) {
  const double d = distance(a, b);
  if (d < b.resolution_a) return kZeroBits;
  return Bits(std::log2(std::numbers::pi * d * d / (b.resolution_a * b.resolution_a)));
}

/// Two-sided interval coding: log2(2t / tau), zero inside one resolution step.
inline Bits temporal_relative(const TimePoint& t2, const TimePoint& t1) {
  const double t = std::abs(t2.t - t1.t);
  if (t < t2.resolution_tau) return kZeroBits;
  return Bits(std::log2(2.0 * t / t2.resolution_tau));
}

inline Bits temporal_absolute(const TimePoint& t, const WorldModel& w) {
  if (!(t.resolution_tau > 0.0) || t.resolution_tau > w.time_window_T)
    throw Error(ErrorCode::ResolutionExceedsWindow, "resolution " + std::to_string(t.resolution_tau) + " h");
  return Bits(std::log2(w.time_window_T / t.resolution_tau));
}

/// One event among those of spatial density D: log2(1 / (a^2 D)).
inline Bits density_localization(double density, double a) {
  if (!(density > 0.0) || !(a > 0.0)) throw Error(ErrorCode::InvalidArgument, "density and resolution must be > 0");
  const double expected = a * a * density;
  if (expected > 1.0) throw Error(ErrorCode::DensityTooHigh, "a^2 * D = " + std::to_string(expected));
  return Bits(std::log2(1.0 / expected));
}

/// Rank of a person when people are enumerated outwards from `l`:
/// log2(max(1, rho * pi * d^2)) with d the distance from l to their home.
inline Bits person_by_distance_rank(const Entity& p, const Location& l, const WorldModel& w) {
  if (p.kind != EntityKind::person || !p.home) throw Error(ErrorCode::MissingHome, p.id);
  const double d = distance(*p.home, l);
  const double count = w.population_density_rho * std::numbers::pi * d * d;
  return Bits(std::log2(std::max(1.0, count)));
}

struct FeatureCost {
  Bits bits;
  std::string_view rule;
};

/// Instantiation cost of a feature value on either machine.
///
/// Categories: W may choose within the likely set, O pays for the whole
/// domain. Numerals: W fills an open L-digit template digit by digit; O runs
/// the shortest numeral program, or falls back to W's template reading when
/// the digits have no exploitable structure.
inline FeatureCost feature_instantiation(const FeatureValue& f, MachineKind machine, const InstructionCostModel& m) {
  if (!f.is_numeral()) {
    if (machine == MachineKind::W && f.likely_set_size)
      return {Bits(std::log2(static_cast<double>(*f.likely_set_size))), "likely-set"};
    return {Bits(std::log2(static_cast<double>(f.domain_size))), "domain"};
  }
  const std::string text = f.literal_text();
  const Bits templated = numeral_template_cost(text.size(), m) + static_cast<double>(text.size()) * m.digit();
  if (machine == MachineKind::W) return {templated, "digit-template"};
  const Bits program = digit_string_complexity(text, m);
  if (program <= templated) return {program, "numeral-program"};
  return {templated, "any-amount"};
}

}  // namespace cdrop
