#include "lhv/hidden_values.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "lhv/core_model.hpp"
#include "lhv/errors.hpp"
#include "lhv/quantum_oracle.hpp"

namespace lhv {
namespace {

constexpr double kQuadTol = 1e-10;
constexpr double kEmpty = 1e-15;

double integrate(const std::function<double(double)>& f, double a, double b) {
  using boost::math::quadrature::gauss_kronrod;
  // Single-panel G7/K15 calls give honest error estimates; the library's own
  // recursion reports inflated ones, so bisection is driven here.
  double total = 0.0, total_err = 0.0;
  std::function<void(double, double, int)> panel = [&](double lo, double hi, int depth) {
    double err = 0.0;
    const double v = gauss_kronrod<double, 15>::integrate(f, lo, hi, 0, 0.0, &err);
    if (err <= 1e-15 || depth == 20) {
      total += v;
      total_err += err;
      return;
    }
    const double mid = 0.5 * (lo + hi);
    panel(lo, mid, depth + 1);
    panel(mid, hi, depth + 1);
  };
  panel(a, b, 0);
  if (!(total_err <= kQuadTol)) throw ContractError("quadrature did not reach tolerance");
  return total;
}

/// The arc [start, start + pi) on the circle, split into pieces of [-pi, pi).
std::vector<Interval> half_circle(double start) {
  const double lo = wrap(start);
  const double hi = lo + kPi;
  if (hi <= kPi) return {{lo, hi}};
  return {{lo, kPi}, {-kPi, hi - kTwoPi}};
}

}  // namespace

HiddenValueTriple hidden_triple(Angle omega) {
  const double w = omega.rad();
  const double s = response(omega);
  HiddenValueTriple t;
  t.s_ref = s;
  t.s_perp = Complex(0.0, s);
  if (w == 0.0 || w == -kPi) {
    t.s_flight = Complex(std::numeric_limits<double>::infinity(), 0.0);
  } else {
    t.s_flight = Complex(-s / std::tan(w), 0.0);
  }
  return t;
}

Complex hidden_at_direction(Angle omega, Angle delta_omega) {
  const HiddenValueTriple t = hidden_triple(omega);
  return std::cos(delta_omega.rad()) * t.s_ref + std::sin(delta_omega.rad()) * t.s_perp;
}

double CoarseSubset::measure() const {
  double m = 0.0;
  for (const auto& iv : intervals) {
    const double upper = iv.hi >= kPi ? 1.0 : cdf_g(Angle(iv.hi));
    m += upper - cdf_g(Angle(iv.lo));
  }
  return m;
}

bool CoarseSubset::contains(Angle omega) const {
  const double w = omega.rad();
  return std::any_of(intervals.begin(), intervals.end(),
                     [w](const Interval& iv) { return w >= iv.lo && w < iv.hi; });
}

CoarseSubset coarse_subset(int s_own, int s_other, Angle delta) {
  const auto own = half_circle(s_own > 0 ? 0.0 : -kPi);
  const auto other = half_circle(s_other > 0 ? delta.rad() - kPi : delta.rad());
  CoarseSubset out;
  out.s_own = s_own;
  out.s_other = s_other;
  for (const auto& a : own) {
    for (const auto& b : other) {
      const double lo = std::max(a.lo, b.lo);
      const double hi = std::min(a.hi, b.hi);
      if (hi > lo) out.intervals.push_back({lo, hi});
    }
  }
  std::sort(out.intervals.begin(), out.intervals.end(),
            [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
  return out;
}

Complex coarse_average(const std::function<Complex(double)>& quantity, const CoarseSubset& subset) {
  double mass = 0.0, re = 0.0, im = 0.0;
  for (const auto& iv : subset.intervals) {
    mass += integrate([](double w) { return density_g(Angle(w)); }, iv.lo, iv.hi);
    re += integrate([&](double w) { return density_g(Angle(w)) * quantity(w).real(); }, iv.lo, iv.hi);
    im += integrate([&](double w) { return density_g(Angle(w)) * quantity(w).imag(); }, iv.lo, iv.hi);
  }
  if (mass <= kEmpty) throw std::domain_error("coarse_average: subset has zero measure");
  return {re / mass, im / mass};
}

std::string component_name(HiddenComponent c) {
  switch (c) {
    case HiddenComponent::Reference: return "s_ref";
    case HiddenComponent::Orthogonal: return "s_perp";
    case HiddenComponent::Flight: return "s_flight";
  }
  return "?";
}

Complex coarse_component_average(HiddenComponent c, const CoarseSubset& subset) {
  switch (c) {
    case HiddenComponent::Reference:
      return coarse_average([](double w) { return Complex(hidden_triple(Angle(w)).s_ref); }, subset);
    case HiddenComponent::Orthogonal:
      return coarse_average([](double w) { return hidden_triple(Angle(w)).s_perp; }, subset);
    case HiddenComponent::Flight: {
      // g(w) * (-s cot w) = -s |sin w| cos(w) / (4 sin w), and sign(sin w) = s
      // on [-pi, pi), so the product is -cos(w) / 4 on every subset.
      double mass = 0.0, num = 0.0;
      for (const auto& iv : subset.intervals) {
        mass += integrate([](double w) { return density_g(Angle(w)); }, iv.lo, iv.hi);
        num += integrate([](double w) { return -0.25 * std::cos(w); }, iv.lo, iv.hi);
      }
      if (mass <= kEmpty) throw std::domain_error("coarse_average: subset has zero measure");
      return {num / mass, 0.0};
    }
  }
  throw std::invalid_argument("unknown component");
}

bool WeakValueReport::pass() const {
  if (degenerate) return false;
  return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.pass; });
}

double WeakValueReport::max_abs_diff() const {
  double m = 0.0;
  for (const auto& e : entries) m = std::max(m, e.abs_diff);
  return m;
}

WeakValueReport verify_weak_value_match(Angle phi, Angle delta_omega, Angle omega_a) {
  WeakValueReport rep;
  rep.phi = phi.rad();
  rep.delta_omega = delta_omega.rad();
  const Angle delta = delta_omega - phi;
  rep.delta = delta.rad();
  rep.degenerate = delta.rad() == 0.0 || delta.rad() == -kPi;
  if (rep.degenerate) return rep;

  const QuantumState psi = bell_state(phi);
  const Angle omega_b = omega_a + delta_omega;
  const std::array<std::pair<HiddenComponent, Axis>, 3> pairs{{
      {HiddenComponent::Reference, Axis::InPlane},
      {HiddenComponent::Orthogonal, Axis::OrthogonalInPlane},
      {HiddenComponent::Flight, Axis::Flight},
  }};
  auto op_name = [](Axis a) {
    switch (a) {
      case Axis::InPlane: return std::string("sigma_ref");
      case Axis::OrthogonalInPlane: return std::string("sigma_perp");
      case Axis::Flight: return std::string("sigma_z");
    }
    return std::string("?");
  };
  auto compare = [&](int sa, int sb, HiddenComponent c, Axis axis, const CoarseSubset& subset,
                     bool particle_b) {
    WeakValueComparison e;
    e.s_a = sa;
    e.s_b = sb;
    e.hidden = component_name(c);
    e.operator_ = op_name(axis);
    e.hidden_average = coarse_component_average(c, subset);
    const Operator single = polarization_operator(particle_b ? omega_b : omega_a, axis);
    e.weak_value = weak_value(psi, {omega_a, sa, omega_b, sb}, particle_b ? on_b(single) : on_a(single));
    e.abs_diff = std::abs(e.hidden_average - e.weak_value);
    e.pass = e.abs_diff <= rep.tolerance;
    return e;
  };

  for (int sa : {1, -1}) {
    for (int sb : {1, -1}) {
      const CoarseSubset a_frame = coarse_subset(sa, sb, delta);
      const CoarseSubset b_frame = coarse_subset(sb, sa, delta);
      for (const auto& [c, axis] : pairs) {
        rep.entries.push_back(compare(sa, sb, c, axis, a_frame, false));
        rep.b_side.push_back(compare(sa, sb, c, axis, b_frame, true));
      }
      rep.flight_vs_orthogonal.push_back(
          compare(sa, sb, HiddenComponent::Flight, Axis::OrthogonalInPlane, a_frame, false));
    }
  }
  return rep;
}

namespace {

nlohmann::json complex_json(Complex z) { return {{"re", z.real()}, {"im", z.imag()}}; }

nlohmann::json comparisons_json(const std::vector<WeakValueComparison>& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& e : v) {
    arr.push_back({{"s_a", e.s_a},
                   {"s_b", e.s_b},
                   {"hidden", e.hidden},
                   {"operator", e.operator_},
                   {"hidden_average", complex_json(e.hidden_average)},
                   {"weak_value", complex_json(e.weak_value)},
                   {"difference", complex_json(e.hidden_average - e.weak_value)},
                   {"abs_diff", e.abs_diff},
                   {"pass", e.pass}});
  }
  return arr;
}

}  // namespace

nlohmann::json to_json(const WeakValueReport& r) {
  return {{"phi_rad", r.phi},
          {"delta_omega_rad", r.delta_omega},
          {"delta_rad", r.delta},
          {"degenerate", r.degenerate},
          {"tolerance", r.tolerance},
          {"pass", r.pass()},
          {"max_abs_diff", r.max_abs_diff()},
          {"comparisons", comparisons_json(r.entries)},
          {"flight_vs_orthogonal", comparisons_json(r.flight_vs_orthogonal)},
          {"b_side", {{"extrapolated", true}, {"comparisons", comparisons_json(r.b_side)}}}};
}

}  // namespace lhv
