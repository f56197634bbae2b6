#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "lhv/analytic.hpp"
#include "lhv/angle.hpp"

namespace lhv {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Pure state of one (dim 2) or two (dim 4) spin-1/2 particles.
/// Basis order for dim 4 is (up-up, up-down, down-up, down-down), with
/// particle A the left tensor factor.
class QuantumState {
 public:
  explicit QuantumState(CVector amplitudes);

  [[nodiscard]] const CVector& amplitudes() const { return amps_; }
  [[nodiscard]] int dim() const { return static_cast<int>(amps_.size()); }
  [[nodiscard]] double norm() const { return amps_.norm(); }

 private:
  CVector amps_;
};

/// Dense 2x2 or 4x4 complex matrix.
class Operator {
 public:
  explicit Operator(CMatrix entries);

  [[nodiscard]] const CMatrix& matrix() const { return m_; }
  [[nodiscard]] int dim() const { return static_cast<int>(m_.rows()); }
  [[nodiscard]] bool is_hermitian(double tol = 1e-12) const;

 private:
  CMatrix m_;
};

enum class Axis { InPlane, OrthogonalInPlane, Flight };

/// (|up down> - e^{-i phi} |down up>) / sqrt(2).
QuantumState bell_state(Angle phi);

/// cos(W) X + sin(W) Y for the in-plane axis, the same at W + pi/2 for the
/// orthogonal axis, Z for the flight axis.
Operator polarization_operator(Angle omega_ref, Axis axis);

Operator identity_operator(int dim);

/// O (x) 1 and 1 (x) O for a single-particle operator.
Operator on_a(const Operator& op);
Operator on_b(const Operator& op);

/// Lifts a single-particle operator onto subsystem A; 4x4 operators pass through.
Operator as_two_particle(const Operator& op);

/// Joint strong-measurement outcome used as a post-selection.
struct PostSelection {
  Angle omega_a;
  int s_a = 1;
  Angle omega_b;
  int s_b = 1;
};

/// Eigenvector of the in-plane polarization at `omega` with eigenvalue s.
CVector polarization_eigenvector(Angle omega, int s);

/// Product ket |s_a at omega_a> (x) |s_b at omega_b>.
CVector post_selection_ket(const PostSelection& post);

/// Outcome probabilities of the in-plane polarizations of A at omega_a and B
/// at omega_b, from projector expectation values.
JointDistribution born_probabilities(const QuantumState& state, Angle omega_a, Angle omega_b);

Complex expectation(const QuantumState& state, const Operator& op);

/// <f|O|psi> / <f|psi>. Single-particle operators act on A. Throws
/// std::domain_error if |<f|psi>| <= 1e-12.
Complex weak_value(const QuantumState& pre, const PostSelection& post, const Operator& op);

/// exp(-i H t) for Hermitian H: closed form in dim 2, eigendecomposition in dim 4.
CMatrix propagator(const Operator& hamiltonian, double t);

/// exp(+iHt) O exp(-iHt). A single-particle hamiltonian acting on a
/// two-particle operator is lifted onto subsystem A.
Operator heisenberg_evolve(const Operator& op, const Operator& hamiltonian, double t);

struct PathBranch {
  int s_a = 1;
  int s_b = 1;
  double probability = 0.0;
  /// Absent when the branch has vanishing overlap with the state.
  std::optional<std::vector<std::pair<std::string, Complex>>> weak_values;
};

struct PathEnsemble {
  double t = 0.0;
  std::array<PathBranch, 4> branches;

  [[nodiscard]] double total_probability() const;
  /// sum p * O_w for the named operator.
  [[nodiscard]] Complex weighted_average(const std::string& name) const;
};

using NamedOperators = std::vector<std::pair<std::string, Operator>>;

std::vector<PathEnsemble> path_ensemble(const QuantumState& state, Angle omega_a, Angle omega_b,
                                        const NamedOperators& ops, const Operator& hamiltonian,
                                        const std::vector<double>& times);

/// sum over branches of p * conj(O1_w(t1)) * O2_w(t2).
Complex path_correlation(const PathEnsemble& at_t1, const std::string& op1,
                         const PathEnsemble& at_t2, const std::string& op2);

/// {"dim": 2|4, "re": [[...]], "im": [[...]]}; rows may also be given as one
/// flat row-major array. Hermiticity is validated.
Operator operator_from_json(const nlohmann::json& j);
nlohmann::json operator_to_json(const Operator& op);
Operator load_operator(const std::string& path);
/// A JSON object mapping names to operator objects.
NamedOperators load_named_operators(const std::string& path);

}  // namespace lhv
