#pragma once

#include <vector>

#include "lhv/angle.hpp"
#include "lhv/rng.hpp"

namespace lhv {

/// Relative apparatus orientation, state phase and density index.
/// Only the effective parameter wrap(delta_omega - phi) enters the model.
class MeasurementSetting {
 public:
  MeasurementSetting(Angle delta_omega, Angle phi, int n = 1);

  [[nodiscard]] Angle delta_omega() const { return delta_omega_; }
  [[nodiscard]] Angle phi() const { return phi_; }
  [[nodiscard]] int n() const { return n_; }
  [[nodiscard]] Angle effective() const { return delta_omega_ - phi_; }

  /// Setting reached by rotating the apparatus a further `extra` away from
  /// this one. Measured from the current setting the state phase reads
  /// phi' = phi - delta_omega, so the composite effective parameter is
  /// extra + delta_omega - phi.
  [[nodiscard]] MeasurementSetting rotated_by(Angle extra) const;

 private:
  Angle delta_omega_;
  Angle phi_;
  int n_ = 1;
};

struct HiddenConfig {
  Angle omega_a;
};

struct TrialOutcome {
  int s_a = 1;
  int s_b = 1;
  Angle omega_a;
};

/// sign(wrap(omega - delta)) with sign(0) = +1.
int q_sign(Angle omega, Angle delta);

/// The nonlinear, measure-preserving transformation law L(omega; delta).
/// Throws ContractError if an acos argument leaves [-1, 1] by more than 1e-12.
Angle eval_L(Angle omega, Angle delta);

/// Generalised law for density index n. For n == 1 this is eval_L. For
/// n > 1 the deviation of L from the linear law is evaluated on the n-fold
/// cover and scaled by 1/n:
///   L_n = wrap(lin + wrap(L(n w; n d) - wrap(n w - n d)) / n),  lin = wrap(w - d)
/// so that n * L_n == L(n w; n d) (mod 2 pi), which carries g_n onto itself.
Angle eval_L_n(Angle omega, Angle delta, int n);

/// The linear reference law wrap(omega - delta).
Angle eval_linear(Angle omega, Angle delta);

/// Orientation of the hidden configuration in apparatus B's frame.
Angle b_frame_coordinate(Angle omega_a, const MeasurementSetting& setting);

/// Probability density g_n(omega) = |sin(n omega)| / 4.
double density_g(Angle omega, int n = 1);

/// Cumulative distribution of g_n on [-pi, pi), measured from -pi.
double cdf_g(Angle omega, int n = 1);

/// Draws one hidden configuration with density g_n by inverse CDF in the
/// cosine variable, replicated over the 2n half-periods for n > 1.
HiddenConfig sample_hidden(Philox4x32& rng, int n = 1);

/// +1 on [0, pi), -1 on [-pi, 0).
int response(Angle omega);

TrialOutcome measure_pair(const HiddenConfig& config, const MeasurementSetting& setting);

/// Result of comparing pointwise composition of the law against the
/// parameter-additive reading, on a uniform grid.
struct CompositionProbe {
  double max_additivity_gap = 0.0;     // |L(L(w;a);b) - L(w;a+b)| on the circle
  double max_commutativity_gap = 0.0;  // |L(L(w;a);b) - L(L(w;b);a)| on the circle
  double max_linear_additivity_gap = 0.0;
};

CompositionProbe probe_pointwise_composition(Angle a, Angle b, int grid_points);

/// Distance between two angles along the circle, in [0, pi].
double circle_distance(Angle x, Angle y);

}  // namespace lhv
