#include "lhv/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "lhv/errors.hpp"

namespace lhv {
namespace {

constexpr double kAcosSlack = 1e-12;

double checked_acos(double x) {
  if (x < -1.0 - kAcosSlack || x > 1.0 + kAcosSlack) {
    throw ContractError("acos argument out of range: " + std::to_string(x));
  }
  return std::acos(std::clamp(x, -1.0, 1.0));
}

}  // namespace

MeasurementSetting::MeasurementSetting(Angle delta_omega, Angle phi, int n)
    : delta_omega_(delta_omega), phi_(phi), n_(n) {
  if (n < 1) throw std::invalid_argument("density index n must be >= 1");
}

MeasurementSetting MeasurementSetting::rotated_by(Angle extra) const {
  return MeasurementSetting(extra, phi_ - delta_omega_, n_);
}

int q_sign(Angle omega, Angle delta) { return (omega - delta).rad() >= 0.0 ? 1 : -1; }

Angle eval_L(Angle omega, Angle delta) {
  const double w = omega.rad();
  const double d = delta.rad();
  const double cd = std::cos(d);
  const double cw = std::cos(w);
  const int q = q_sign(omega, delta);

  double arg;
  if (d >= 0.0) {
    if (w < d - kPi) {
      arg = -cd - cw - 1.0;
    } else if (w < 0.0) {
      arg = cd + cw - 1.0;
    } else if (w < d) {
      arg = cd - cw + 1.0;
    } else {
      arg = -cd + cw + 1.0;
    }
  } else {
    if (w < d) {
      arg = -cd + cw + 1.0;
    } else if (w < 0.0) {
      arg = cd - cw + 1.0;
    } else if (w < d + kPi) {
      arg = cd + cw - 1.0;
    } else {
      arg = -cd - cw - 1.0;
    }
  }
  return Angle(q * checked_acos(arg));
}

Angle eval_linear(Angle omega, Angle delta) { return omega - delta; }

Angle eval_L_n(Angle omega, Angle delta, int n) {
  if (n < 1) throw std::invalid_argument("density index n must be >= 1");
  if (n == 1) return eval_L(omega, delta);
  const double nw = n * omega.rad();
  const double nd = n * delta.rad();
  const Angle lifted = eval_L(Angle(nw), Angle(nd));
  const double deviation = (lifted - Angle(nw - nd)).rad();
  return Angle(eval_linear(omega, delta).rad() + deviation / n);
}

Angle b_frame_coordinate(Angle omega_a, const MeasurementSetting& setting) {
  return -eval_L_n(omega_a, setting.effective(), setting.n());
}

double density_g(Angle omega, int n) { return 0.25 * std::abs(std::sin(n * omega.rad())); }

double cdf_g(Angle omega, int n) {
  const double cell = kPi / n;
  const double u = omega.rad() + kPi;
  const double k = std::floor(u / cell);
  const double t = u - k * cell;
  return k / (2.0 * n) + (1.0 - std::cos(n * t)) / (4.0 * n);
}

HiddenConfig sample_hidden(Philox4x32& rng, int n) {
  if (n < 1) throw std::invalid_argument("density index n must be >= 1");
  const std::uint64_t bits = rng();
  // Midpoint of one of 2^53 equal cells of (-1, 1): never exactly +-1, so the
  // measure-zero points omega in {0, -pi} are never produced.
  const double u = (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-52 - 1.0;
  const double sign = (bits & 1u) ? 1.0 : -1.0;
  const double w1 = sign * std::acos(u);
  if (n == 1) return {Angle(w1)};
  const auto k = static_cast<double>(rng.below(2 * static_cast<std::uint64_t>(n)));
  return {Angle(w1 / n + k * kPi / n)};
}

int response(Angle omega) { return omega.rad() >= 0.0 ? 1 : -1; }

TrialOutcome measure_pair(const HiddenConfig& config, const MeasurementSetting& setting) {
  return {response(config.omega_a), response(b_frame_coordinate(config.omega_a, setting)),
          config.omega_a};
}

double circle_distance(Angle x, Angle y) { return std::abs((x - y).rad()); }

CompositionProbe probe_pointwise_composition(Angle a, Angle b, int grid_points) {
  if (grid_points < 1) throw std::invalid_argument("grid_points must be >= 1");
  CompositionProbe out;
  const Angle ab = a + b;
  for (int i = 0; i < grid_points; ++i) {
    const Angle w(-kPi + (i + 0.5) * kTwoPi / grid_points);
    const Angle ab_point = eval_L(eval_L(w, a), b);
    out.max_additivity_gap = std::max(out.max_additivity_gap, circle_distance(ab_point, eval_L(w, ab)));
    out.max_commutativity_gap =
        std::max(out.max_commutativity_gap, circle_distance(ab_point, eval_L(eval_L(w, b), a)));
    out.max_linear_additivity_gap =
        std::max(out.max_linear_additivity_gap,
                 circle_distance(eval_linear(eval_linear(w, a), b), eval_linear(w, ab)));
  }
  return out;
}

}  // namespace lhv
