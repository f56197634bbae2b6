#pragma once

#include <array>
#include <utility>
#include <vector>

#include "lhv/angle.hpp"

namespace lhv {

/// Probabilities of the four joint outcomes (s_a, s_b).
struct JointDistribution {
  double p_pp = 0.0;
  double p_pm = 0.0;
  double p_mp = 0.0;
  double p_mm = 0.0;

  [[nodiscard]] double sum() const { return p_pp + p_pm + p_mp + p_mm; }
  [[nodiscard]] double correlation() const { return p_pp + p_mm - p_pm - p_mp; }
};

/// The three relative angles of a CHSH experiment.
struct ChshSetting {
  Angle d_omega;
  Angle d_omega_p;
  Angle d_omega_pp;

  /// The four effective parameters entering the combination, in the order
  /// (d', d'', d' - d, d'' - d); the last carries the minus sign.
  [[nodiscard]] std::array<Angle, 4> terms() const {
    return {d_omega_p, d_omega_pp, d_omega_p - d_omega, d_omega_pp - d_omega};
  }
};

JointDistribution joint_probabilities(Angle delta);

/// E(delta) = -cos(delta).
double correlation(Angle delta);

struct BellSides {
  double lhs = 0.0;
  double rhs = 0.0;
  bool violated = false;
};

/// |E(d1) - E(d2)| versus 1 + E(d2 - d1). Requires 0 <= d1 <= d2 <= pi
/// (radians, not wrapped, so that d2 = pi is expressible).
BellSides bell_inequality_sides(double d1, double d2);

/// |E(d') + E(d'') + E(d' - d) - E(d'' - d)|.
double chsh_value(const ChshSetting& setting);

/// Points (omega, wrap(omega - delta)) on a uniform grid over [-pi, pi],
/// both ends included so the grid is symmetric about 0.
std::vector<std::pair<double, double>> linear_law_curve(Angle delta, int grid_points);

/// Correlation of the linear law under a uniform hidden density: the
/// piecewise-linear 2|delta|/pi - 1. This is the n -> infinity target of the
/// L_n family.
double sawtooth_correlation(Angle delta);

/// Correlation of the linear law under density g_n, 4 * G_n(|delta|) - 1 with
/// G_n the mass of g_n on [0, |delta|).
double linear_law_correlation(Angle delta, int n);

}  // namespace lhv
