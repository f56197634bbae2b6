#pragma once

#include <numbers>

namespace lhv {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Maps any finite real onto [-pi, pi). Values already in range are returned
/// untouched so that wrapping is idempotent bit for bit. Throws
/// std::invalid_argument on NaN or infinity.
double wrap(double x);

/// An angle in radians, always stored wrapped to [-pi, pi).
class Angle {
 public:
  constexpr Angle() = default;
  explicit Angle(double radians) : value_(wrap(radians)) {}

  [[nodiscard]] double rad() const { return value_; }

  friend Angle operator+(Angle a, Angle b) { return Angle(a.value_ + b.value_); }
  friend Angle operator-(Angle a, Angle b) { return Angle(a.value_ - b.value_); }
  friend Angle operator-(Angle a) { return Angle(-a.value_); }
  friend bool operator==(Angle a, Angle b) = default;

 private:
  double value_ = 0.0;
};

inline Angle wrap_angle(double x) { return Angle(x); }

}  // namespace lhv
