#pragma once

#include <bit>
#include <cmath>
#include <cstdint>

#include "cdrop/bits.hpp"
#include "cdrop/errors.hpp"

namespace cdrop {

/// Prices of the numeral instruction language {EMIT_DIGIT, COPY, REPEAT, POW10}.
///
/// Used by both the digit codec and the oracle.
struct InstructionCostModel {
  /// Price of naming one opcode; log2 of a 4-opcode alphabet by default.
  double opcode_cost = 2.0;
  /// REPEAT counts range over 1..repeat_k_max and cost log2(repeat_k_max).
  std::int64_t repeat_k_max = 16;

  Bits opcode() const { return Bits(opcode_cost); }

  /// Choosing one of ten digits.
  static Bits digit() { return Bits(std::log2(10.0)); }

  Bits repeat_count() const { return Bits(std::log2(static_cast<double>(repeat_k_max))); }

  /// POW10 exponents use an Elias-gamma length so small exponents stay cheap.
  static Bits exponent(std::int64_t e) {
    if (e < 1) throw Error(ErrorCode::InvalidArgument, "POW10 exponent must be >= 1");
    const auto width = std::bit_width(static_cast<std::uint64_t>(e));
    return Bits(static_cast<double>(2 * (width - 1) + 1));
  }

  Bits emit_cost() const { return opcode() + digit(); }
  Bits copy_cost() const { return opcode(); }
  Bits repeat_cost() const { return opcode() + repeat_count(); }
  Bits pow10_cost(std::int64_t e) const { return opcode() + exponent(e); }

  void check() const {
    if (!(opcode_cost >= 0.0) || !std::isfinite(opcode_cost))
      throw Error(ErrorCode::InvalidArgument, "opcode_cost must be finite and >= 0");
    if (repeat_k_max < 2) throw Error(ErrorCode::InvalidArgument, "repeat_k_max must be >= 2");
  }

  friend bool operator==(const InstructionCostModel&, const InstructionCostModel&) = default;
};

}  // namespace cdrop
