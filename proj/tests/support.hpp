#pragma once

// Shared helpers for the test binaries: fixture loading, small scenario
// builders, and brute-force reference implementations that do not share code
// paths with the library's optimizers.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "cdrop/cdrop.hpp"

namespace testing_support {

using namespace cdrop;

inline std::string fixture_path(const std::string& name) { return std::string(CDROP_SCENARIO_DIR) + "/" + name; }
inline std::string sweep_path(const std::string& name) { return std::string(CDROP_SWEEP_DIR) + "/" + name; }

inline Scenario fixture(const std::string& name) { return io::load_scenario(fixture_path(name)); }
inline io::json fixture_json(const std::string& name) { return io::read_json_file(fixture_path(name)); }

inline std::vector<std::string> all_fixture_names() {
  std::vector<std::string> out;
  for (const auto& entry : std::filesystem::directory_iterator(CDROP_SCENARIO_DIR))
    if (entry.path().extension() == ".json") out.push_back(entry.path().filename().string());
  std::sort(out.begin(), out.end());
  return out;
}

inline Location cell(double x, double y, double a, std::string id = {}) {
  Location l;
  l.id = std::move(id);
  l.x = x;
  l.y = y;
  l.resolution_a = a;
  return l;
}

inline FeatureValue category(std::string name, std::string token, std::uint64_t domain) {
  return FeatureValue{std::move(name), Category{std::move(token)}, domain, std::nullopt};
}

inline FeatureValue digits(std::string name, std::string d) {
  return FeatureValue{std::move(name), DigitString{std::move(d)}, 1, std::nullopt};
}

inline FeatureValue integer(std::string name, std::uint64_t n) {
  return FeatureValue{std::move(name), n, 1, std::nullopt};
}

inline Scenario blank_world(double area = 551695.0, double window = 24.0, double rho = 100.0) {
  Scenario s;
  s.world.area_S = area;
  s.world.time_window_T = window;
  s.world.population_density_rho = rho;
  s.observer = Observer::ego(cell(0, 0, 1));
  return s;
}

// ---------------------------------------------------------------------------
// Reference: minimum over orderings by plain permutation enumeration.

struct BruteMin {
  double total = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> order;
};

/// Tries every subset of hypotheses (W only) and every permutation of the
/// chosen atoms that respects presence dependencies, pricing each one with
/// chain_cost. Exponential; meant for <= 8 atoms.
inline BruteMin brute_force_min(const Scenario& s, MachineKind machine) {
  const auto atoms = build_atoms(s);
  std::vector<std::size_t> base;
  std::vector<std::size_t> hyps;
  for (std::size_t i = 0; i < atoms.size(); ++i) (atoms[i].is_hypothesis() ? hyps : base).push_back(i);
  if (machine == MachineKind::O) hyps.clear();

  const auto deps = atom_dependencies(atoms);
  BruteMin best;
  for (std::uint32_t subset = 0; subset < (1u << hyps.size()); ++subset) {
    std::vector<std::size_t> chosen = base;
    for (std::size_t h = 0; h < hyps.size(); ++h)
      if (subset & (1u << h)) chosen.push_back(hyps[h]);
    std::sort(chosen.begin(), chosen.end());
    do {
      bool ok = true;
      for (std::size_t p = 0; p < chosen.size() && ok; ++p)
        for (auto d : deps[chosen[p]]) {
          const auto at = std::find(chosen.begin(), chosen.end(), d);
          if (at != chosen.end() && static_cast<std::size_t>(at - chosen.begin()) > p) ok = false;
        }
      if (!ok) continue;
      ComputationSequence seq;
      for (auto i : chosen) seq.atoms.push_back(atoms[i]);
      const double c = chain_cost(seq, machine, s).total.value();
      if (c < best.total - 1e-9) best = {c, chosen};
    } while (std::next_permutation(chosen.begin(), chosen.end()));
  }
  return best;
}

// ---------------------------------------------------------------------------
// Reference: cheapest numeral program by depth-first search over instruction
// lists, bounded by the verbatim program cost.

inline double brute_force_program_cost(const std::string& target, const InstructionCostModel& m) {
  const double emit = m.opcode_cost + std::log2(10.0);
  const double copy = m.opcode_cost;
  const double repeat = m.opcode_cost + std::log2(static_cast<double>(m.repeat_k_max));
  const auto pow10 = [&](std::size_t e) {
    return m.opcode_cost + 2.0 * std::floor(std::log2(static_cast<double>(e))) + 1.0;
  };

  double best = emit * static_cast<double>(target.size()) + 1e-9;
  std::function<void(std::size_t, double)> go = [&](std::size_t pos, double spent) {
    if (spent > best) return;
    if (pos == target.size()) {
      best = std::min(best, spent);
      return;
    }
    go(pos + 1, spent + emit);
    if (pos == 0) return;
    const char last = target[pos - 1];
    if (target[pos] == last) go(pos + 1, spent + copy);
    for (std::size_t k = 1; k <= static_cast<std::size_t>(m.repeat_k_max) && pos + k <= target.size(); ++k) {
      if (target[pos + k - 1] != last) break;
      go(pos + k, spent + repeat);
    }
    for (std::size_t e = 1; pos + e <= target.size(); ++e) {
      if (target[pos + e - 1] != '0') break;
      go(pos + e, spent + pow10(e));
    }
  };
  go(0, 0.0);
  return best;
}

// ---------------------------------------------------------------------------
// Random small scenarios for property tests, kept to at most 7 atoms so the
// permutation reference stays cheap.

inline Scenario random_scenario_once(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_int_distribution<int> token(0, 2);
  std::uniform_real_distribution<double> coord(-50.0, 50.0);
  std::uniform_int_distribution<int> gap(1, 3);

  Scenario s = blank_world();
  s.observer = Observer::ego(cell(coord(rng), coord(rng), 0.5));
  Entity p;
  p.id = "p";
  p.prominence_rank = std::uniform_int_distribution<std::int64_t>(1, 200)(rng);
  p.home = cell(coord(rng), coord(rng), 0.5);
  p.known_to_world = coin(rng) == 1;
  s.world.entities.push_back(p);

  const char* tokens[] = {"red", "green", "blue"};
  const char* numerals[] = {"100", "87", "66"};
  for (int e = 0; e < 2; ++e) {
    EventDescription ev;
    ev.id = "e" + std::to_string(e + 1);
    ev.features.push_back(category("colour", tokens[token(rng)], 16));
    if (coin(rng)) ev.features.push_back(digits("count", numerals[token(rng)]));
    if (coin(rng)) ev.participants.push_back("p");
    if (coin(rng)) ev.location = cell(coord(rng), coord(rng), 0.5);
    if (ev.location && !ev.participants.empty() && coin(rng)) {
      ev.participants.insert(ev.participants.begin(), "ego");
      ev.present = {"ego", "p"};
    }
    if (coin(rng)) ev.time = TimePoint{static_cast<double>(gap(rng) * 2 + e), 0.25};
    s.events.push_back(ev);
  }
  if (coin(rng)) {
    CausalHypothesis h;
    h.id = "h";
    h.credibility_cost = Bits(std::uniform_real_distribution<double>(0.0, 60.0)(rng));
    h.explains = {"e2"};
    s.hypotheses.push_back(h);
  }
  return s;
}

inline Scenario random_scenario(std::mt19937_64& rng) {
  for (;;) {
    Scenario s = random_scenario_once(rng);
    if (build_atoms(s).size() <= 7) return s;
  }
}

}  // namespace testing_support
