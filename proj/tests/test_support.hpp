#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "lhv/angle.hpp"
#include "lhv/core_model.hpp"

namespace lhv::testing {

/// Uniform grid of `points` values over [-pi, pi).
inline std::vector<double> circle_grid(int points) {
  std::vector<double> g;
  for (int i = 0; i < points; ++i) g.push_back(-kPi + kTwoPi * (i + 0.5) / points);
  return g;
}

/// Kolmogorov-Smirnov distance of samples against cdf_g for index n.
inline double ks_distance(std::vector<double> xs, int n) {
  std::sort(xs.begin(), xs.end());
  const double m = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf_g(Angle(xs[i]), n);
    d = std::max({d, std::abs(f - static_cast<double>(i) / m), std::abs(f - static_cast<double>(i + 1) / m)});
  }
  return d;
}

}  // namespace lhv::testing
