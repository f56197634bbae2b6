#include "lhv/analytic.hpp"

#include <cmath>
#include <stdexcept>

#include "lhv/core_model.hpp"

namespace lhv {

JointDistribution joint_probabilities(Angle delta) {
  const double c = std::cos(delta.rad());
  const double same = 0.25 * (1.0 - c);
  const double diff = 0.25 * (1.0 + c);
  return {same, diff, diff, same};
}

double correlation(Angle delta) { return -std::cos(delta.rad()); }

BellSides bell_inequality_sides(double d1, double d2) {
  if (!(d1 >= 0.0 && d1 <= d2 && d2 <= kPi)) {
    throw std::invalid_argument("bell_inequality_sides requires 0 <= d1 <= d2 <= pi");
  }
  auto e = [](double x) { return -std::cos(x); };
  BellSides out;
  out.lhs = std::abs(e(d1) - e(d2));
  out.rhs = 1.0 + e(d2 - d1);
  out.violated = out.lhs > out.rhs + 1e-12;
  return out;
}

double chsh_value(const ChshSetting& setting) {
  const auto t = setting.terms();
  return std::abs(correlation(t[0]) + correlation(t[1]) + correlation(t[2]) - correlation(t[3]));
}

std::vector<std::pair<double, double>> linear_law_curve(Angle delta, int grid_points) {
  if (grid_points < 2) throw std::invalid_argument("grid_points must be >= 2");
  std::vector<std::pair<double, double>> out;
  out.reserve(static_cast<std::size_t>(grid_points));
  for (int i = 0; i < grid_points; ++i) {
    const double w = -kPi + kTwoPi * i / (grid_points - 1);
    out.emplace_back(w, eval_linear(Angle(w), delta).rad());
  }
  return out;
}

double sawtooth_correlation(Angle delta) { return 2.0 * std::abs(delta.rad()) / kPi - 1.0; }

double linear_law_correlation(Angle delta, int n) {
  const double d = std::abs(delta.rad());
  if (d >= kPi) return 1.0;
  // mass of g_n on [0, d)
  return 4.0 * (cdf_g(Angle(d), n) - cdf_g(Angle(0.0), n)) - 1.0;
}

}  // namespace lhv
