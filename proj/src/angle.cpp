#include "lhv/angle.hpp"

#include <cmath>
#include <stdexcept>

namespace lhv {

double wrap(double x) {
  if (!std::isfinite(x)) {
    throw std::invalid_argument("wrap: non-finite angle");
  }
  if (x >= -kPi && x < kPi) {
    return x + 0.0;  // folds -0.0 onto +0.0
  }
  double r = std::fmod(x + kPi, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  double w = r - kPi;
  // rounding in the shift can land exactly on +pi
  if (w >= kPi) w = -kPi;
  if (w < -kPi) w = -kPi;
  return w + 0.0;
}

}  // namespace lhv
