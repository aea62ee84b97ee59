#pragma once

#include <cmath>
#include <compare>
#include <ostream>

namespace cdrop {

/// A description length in bits. Codec and machine costs are never
/// negative; differences between costs (unexpectedness) may be.
class Bits {
 public:
  constexpr Bits() = default;
  constexpr explicit Bits(double v) : value_(v) {}

  constexpr double value() const { return value_; }

  constexpr Bits& operator+=(Bits o) {
    value_ += o.value_;
    return *this;
  }
  constexpr Bits& operator-=(Bits o) {
    value_ -= o.value_;
    return *this;
  }
  friend constexpr Bits operator+(Bits a, Bits b) { return Bits(a.value_ + b.value_); }
  friend constexpr Bits operator-(Bits a, Bits b) { return Bits(a.value_ - b.value_); }
  friend constexpr Bits operator-(Bits a) { return Bits(-a.value_); }
  friend constexpr Bits operator*(double k, Bits b) { return Bits(k * b.value_); }
  friend constexpr auto operator<=>(Bits, Bits) = default;

  friend std::ostream& operator<<(std::ostream& os, Bits b) { return os << b.value_ << " bits"; }

 private:
  double value_ = 0.0;
};

inline Bits log2_bits(double x) { return Bits(std::log2(x)); }

inline bool near(Bits a, Bits b, double tol) { return std::abs(a.value() - b.value()) <= tol; }

inline const Bits kZeroBits{0.0};

}  // namespace cdrop
