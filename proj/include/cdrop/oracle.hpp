#pragma once

// Brute-force minimal-program search over the numeral instruction language.
// Used to check the closed-form digit codec; it shares nothing with it except
// the instruction prices.

#include <cmath>
#include <cstdint>
#include <queue>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cdrop/bits.hpp"
#include "cdrop/codecs.hpp"
#include "cdrop/cost_model.hpp"
#include "cdrop/errors.hpp"

namespace cdrop::oracle {

struct Emit {
  int digit;
  friend auto operator<=>(const Emit&, const Emit&) = default;
};
struct Copy {
  friend auto operator<=>(const Copy&, const Copy&) = default;
};
struct Repeat {
  std::int64_t count;
  friend auto operator<=>(const Repeat&, const Repeat&) = default;
};
struct Pow10 {
  std::int64_t exponent;
  friend auto operator<=>(const Pow10&, const Pow10&) = default;
};

using Instruction = std::variant<Emit, Copy, Repeat, Pow10>;

inline Bits instruction_cost(const Instruction& ins, const InstructionCostModel& m) {
  return std::visit(
      [&](const auto& i) -> Bits {
        using T = std::decay_t<decltype(i)>;
        if constexpr (std::is_same_v<T, Emit>) return m.emit_cost();
        else if constexpr (std::is_same_v<T, Copy>) return m.copy_cost();
        else if constexpr (std::is_same_v<T, Repeat>) return m.repeat_cost();
        else return m.pow10_cost(i.exponent);
      },
      ins);
}

struct Program {
  std::vector<Instruction> instructions;

  Bits cost(const InstructionCostModel& m) const {
    Bits total{0.0};
    for (const auto& ins : instructions) total += instruction_cost(ins, m);
    return total;
  }
};

/// EMIT appends its digit; COPY appends the last output digit; REPEAT(k)
/// appends k of them; POW10(e) appends e zeros.
inline std::string execute(const Program& p) {
  std::string out;
  for (const auto& ins : p.instructions) {
    if (const auto* e = std::get_if<Emit>(&ins)) {
      if (e->digit < 0 || e->digit > 9) throw Error(ErrorCode::InvalidDigit, std::to_string(e->digit));
      out.push_back(static_cast<char>('0' + e->digit));
      continue;
    }
    if (out.empty()) throw Error(ErrorCode::CopyWithoutContext, "program must start with EMIT_DIGIT");
    if (std::holds_alternative<Copy>(ins)) {
      out.push_back(out.back());
    } else if (const auto* r = std::get_if<Repeat>(&ins)) {
      if (r->count < 1) throw Error(ErrorCode::InvalidArgument, "REPEAT count must be >= 1");
      out.append(static_cast<std::size_t>(r->count), out.back());
    } else {
      const auto e = std::get<Pow10>(ins).exponent;
      if (e < 1) throw Error(ErrorCode::InvalidArgument, "POW10 exponent must be >= 1");
      out.append(static_cast<std::size_t>(e), '0');
    }
  }
  return out;
}

struct SearchResult {
  Bits cost;
  Program program;
};

inline constexpr double kDefaultBudgetBits = 48.0;
inline constexpr std::size_t kMaxTargetLength = 8;

/// Uniform-cost search over programs: the first complete program popped is a
/// cheapest one. Equal costs (to 1e-9 bits) fall back to lexicographic order
/// of the instruction list. Prefixes whose output stops matching the target
/// are discarded.
inline SearchResult min_program(std::string_view target, const InstructionCostModel& m,
                                double budget_bits = kDefaultBudgetBits) {
  if (target.empty() || target.size() > kMaxTargetLength)
    throw Error(ErrorCode::TooLong, "oracle targets hold 1-8 digits");
  for (char c : target)
    if (c < '0' || c > '9') throw Error(ErrorCode::InvalidDigit, std::string(target));
  if (!(budget_bits <= 64.0)) throw Error(ErrorCode::InvalidArgument, "budget above 64 bits");

  struct Node {
    std::int64_t key;  // cost in nano-bits
    Bits cost;
    Program program;
    std::string output;
  };
  struct Later {
    bool operator()(const Node& a, const Node& b) const {
      if (a.key != b.key) return a.key > b.key;
      return b.program.instructions < a.program.instructions;
    }
  };
  const auto key_of = [](Bits b) { return std::llround(b.value() * 1e9); };

  std::priority_queue<Node, std::vector<Node>, Later> frontier;
  frontier.push({0, Bits{0.0}, {}, {}});

  const auto fits = [&](const std::string& out) {
    return out.size() <= target.size() && std::string_view(out) == target.substr(0, out.size());
  };

  while (!frontier.empty()) {
    Node node = frontier.top();
    frontier.pop();
    if (node.cost.value() > budget_bits + 1e-9) break;
    if (node.output.size() == target.size()) return {node.cost, node.program};

    std::vector<Instruction> moves;
    for (int d = 0; d <= 9; ++d) moves.emplace_back(Emit{d});
    if (!node.program.instructions.empty()) {
      moves.emplace_back(Copy{});
      for (std::int64_t k = 1; k <= m.repeat_k_max && static_cast<std::size_t>(k) <= target.size(); ++k)
        moves.emplace_back(Repeat{k});
      for (std::int64_t e = 1; static_cast<std::size_t>(e) <= target.size(); ++e) moves.emplace_back(Pow10{e});
    }
    for (const auto& mv : moves) {
      Program child = node.program;
      child.instructions.push_back(mv);
      std::string out = execute(child);
      if (!fits(out)) continue;
      const Bits cost = node.cost + instruction_cost(mv, m);
      frontier.push({key_of(cost), cost, std::move(child), std::move(out)});
    }
  }
  throw Error(ErrorCode::NotFound, "no program for '" + std::string(target) + "' within " +
                                       std::to_string(budget_bits) + " bits");
}

struct Mismatch {
  std::string target;
  Bits codec;
  Bits oracle;
};

struct SweepSummary {
  std::size_t cases = 0;
  std::vector<Mismatch> mismatches;
};

/// Compares the closed-form codec with the oracle on every digit string of
/// length 1..max_len (10 + 100 + ... strings).
inline SweepSummary equivalence_sweep(std::size_t max_len, const InstructionCostModel& m, double tol = 1e-9) {
  if (max_len < 1 || max_len > 5) throw Error(ErrorCode::OutOfRange, "max_len must be in 1..5");
  SweepSummary summary;
  std::string s;
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::size_t total = 1;
    for (std::size_t i = 0; i < len; ++i) total *= 10;
    for (std::size_t v = 0; v < total; ++v) {
      s.assign(len, '0');
      for (std::size_t i = 0, x = v; i < len; ++i, x /= 10) s[len - 1 - i] = static_cast<char>('0' + x % 10);
      const Bits codec = digit_string_complexity(s, m);
      const Bits found = min_program(s, m).cost;
      ++summary.cases;
      if (!near(codec, found, tol)) summary.mismatches.push_back({s, codec, found});
    }
  }
  return summary;
}

}  // namespace cdrop::oracle
