#pragma once

#include <array>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "lhv/angle.hpp"

namespace lhv {

using Complex = std::complex<double>;

/// Hidden polarization values of one particle in its own reference frame.
struct HiddenValueTriple {
  double s_ref = 1.0;
  Complex s_perp{0.0, 1.0};
  /// Non-finite at the poles omega in {0, -pi}.
  Complex s_flight{0.0, 0.0};

  [[nodiscard]] bool flight_finite() const {
    return std::isfinite(s_flight.real()) && std::isfinite(s_flight.imag());
  }
};

/// (+1, +i, -cot w) on [0, pi); (-1, -i, +cot w) on [-pi, 0).
HiddenValueTriple hidden_triple(Angle omega);

/// cos(d) s_ref + sin(d) s_perp: the hidden polarization along the direction
/// rotated by d from the reference.
Complex hidden_at_direction(Angle omega, Angle delta_omega);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Region of hidden-configuration space selected by a joint outcome, in the
/// coordinate of the particle whose outcome is `s_own`.
struct CoarseSubset {
  int s_own = 1;
  int s_other = 1;
  std::vector<Interval> intervals;

  /// g-mass of the subset.
  [[nodiscard]] double measure() const;
  [[nodiscard]] bool contains(Angle omega) const;
};

/// {omega : response(omega) = s_own and the partner response = s_other}, for
/// effective parameter delta. The partner responds +1 on the arc
/// [delta - pi, delta).
CoarseSubset coarse_subset(int s_own, int s_other, Angle delta);

/// g-weighted mean of `quantity` over the subset, by adaptive Gauss-Kronrod
/// quadrature (absolute tolerance 1e-10). Throws std::domain_error for a
/// subset of zero measure.
Complex coarse_average(const std::function<Complex(double)>& quantity, const CoarseSubset& subset);

enum class HiddenComponent { Reference, Orthogonal, Flight };

std::string component_name(HiddenComponent c);

/// Quadrature average of one hidden component over a subset. The flight
/// component is integrated in the bounded form -s cos(w) / 4 so the cot pole
/// at the subset edge never enters.
Complex coarse_component_average(HiddenComponent c, const CoarseSubset& subset);

struct WeakValueComparison {
  int s_a = 1;
  int s_b = 1;
  std::string hidden;    // hidden component averaged
  std::string operator_; // quantum operator it is compared against
  Complex hidden_average;
  Complex weak_value;
  double abs_diff = 0.0;
  bool pass = false;
};

struct WeakValueReport {
  double phi = 0.0;
  double delta_omega = 0.0;
  double delta = 0.0;
  bool degenerate = false;
  double tolerance = 1e-8;
  /// Particle A: each hidden component against its namesake operator.
  std::vector<WeakValueComparison> entries;
  /// Particle A: the flight component against the in-plane orthogonal operator.
  std::vector<WeakValueComparison> flight_vs_orthogonal;
  /// Particle B, same formulas applied in B's own frame (an extrapolation).
  std::vector<WeakValueComparison> b_side;

  [[nodiscard]] bool pass() const;
  [[nodiscard]] double max_abs_diff() const;
};

/// Compares subset averages of the hidden values against the quantum weak
/// values for all four post-selections. The A reference direction is
/// omega_a; B's is omega_a + delta_omega.
WeakValueReport verify_weak_value_match(Angle phi, Angle delta_omega, Angle omega_a = Angle(0.0));

nlohmann::json to_json(const WeakValueReport& report);

}  // namespace lhv
