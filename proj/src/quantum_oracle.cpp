#include "lhv/quantum_oracle.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "lhv/errors.hpp"

namespace lhv {
namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kUnitarityTol = 1e-10;
constexpr double kOverlapFloor = 1e-12;

CMatrix pauli_x() {
  CMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
CMatrix pauli_y() {
  CMatrix m(2, 2);
  m << 0, -kI, kI, 0;
  return m;
}
CMatrix pauli_z() {
  CMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

void require_dim(int d, const char* what) {
  if (d != 2 && d != 4) throw std::invalid_argument(std::string(what) + ": dimension must be 2 or 4");
}

void require_normalized(const QuantumState& s) {
  if (std::abs(s.norm() - 1.0) > 1e-12) throw std::invalid_argument("state is not normalized");
}

CMatrix projector(Angle omega, int s) {
  return 0.5 * (CMatrix::Identity(2, 2) + double(s) * polarization_operator(omega, Axis::InPlane).matrix());
}

}  // namespace

QuantumState::QuantumState(CVector amplitudes) : amps_(std::move(amplitudes)) {
  require_dim(static_cast<int>(amps_.size()), "QuantumState");
}

Operator::Operator(CMatrix entries) : m_(std::move(entries)) {
  if (m_.rows() != m_.cols()) throw std::invalid_argument("Operator: matrix must be square");
  require_dim(static_cast<int>(m_.rows()), "Operator");
}

bool Operator::is_hermitian(double tol) const {
  return (m_ - m_.adjoint()).cwiseAbs().maxCoeff() <= tol * std::max(1.0, m_.cwiseAbs().maxCoeff());
}

QuantumState bell_state(Angle phi) {
  CVector v = CVector::Zero(4);
  const double r = 1.0 / std::sqrt(2.0);
  v(1) = r;
  v(2) = -std::exp(-kI * phi.rad()) * r;
  return QuantumState(v);
}

Operator polarization_operator(Angle omega_ref, Axis axis) {
  switch (axis) {
    case Axis::InPlane:
      return Operator(std::cos(omega_ref.rad()) * pauli_x() + std::sin(omega_ref.rad()) * pauli_y());
    case Axis::OrthogonalInPlane:
      return polarization_operator(omega_ref + Angle(kPi / 2), Axis::InPlane);
    case Axis::Flight:
      return Operator(pauli_z());
  }
  throw std::invalid_argument("unknown axis");
}

Operator identity_operator(int dim) { return Operator(CMatrix::Identity(dim, dim)); }

Operator on_a(const Operator& op) {
  if (op.dim() != 2) throw std::invalid_argument("on_a expects a single-particle operator");
  return Operator(kron(op.matrix(), CMatrix::Identity(2, 2)));
}

Operator on_b(const Operator& op) {
  if (op.dim() != 2) throw std::invalid_argument("on_b expects a single-particle operator");
  return Operator(kron(CMatrix::Identity(2, 2), op.matrix()));
}

Operator as_two_particle(const Operator& op) { return op.dim() == 2 ? on_a(op) : op; }

CVector polarization_eigenvector(Angle omega, int s) {
  CVector v(2);
  const double r = 1.0 / std::sqrt(2.0);
  v << r, double(s) * std::exp(kI * omega.rad()) * r;
  return v;
}

CVector post_selection_ket(const PostSelection& post) {
  const CVector a = polarization_eigenvector(post.omega_a, post.s_a);
  const CVector b = polarization_eigenvector(post.omega_b, post.s_b);
  CVector out(4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out(2 * i + j) = a(i) * b(j);
  return out;
}

JointDistribution born_probabilities(const QuantumState& state, Angle omega_a, Angle omega_b) {
  if (state.dim() != 4) throw std::invalid_argument("born_probabilities expects a two-particle state");
  require_normalized(state);
  auto p = [&](int sa, int sb) {
    const CMatrix proj = kron(projector(omega_a, sa), projector(omega_b, sb));
    return (state.amplitudes().adjoint() * proj * state.amplitudes())(0).real();
  };
  return {p(1, 1), p(1, -1), p(-1, 1), p(-1, -1)};
}

Complex expectation(const QuantumState& state, const Operator& op) {
  const Operator full = state.dim() == 4 ? as_two_particle(op) : op;
  if (full.dim() != state.dim()) throw std::invalid_argument("expectation: dimension mismatch");
  return state.amplitudes().dot(full.matrix() * state.amplitudes());
}

Complex weak_value(const QuantumState& pre, const PostSelection& post, const Operator& op) {
  if (pre.dim() != 4) throw std::invalid_argument("weak_value expects a two-particle state");
  const CVector f = post_selection_ket(post);
  const Complex overlap = f.dot(pre.amplitudes());
  if (std::abs(overlap) <= kOverlapFloor) {
    throw std::domain_error("weak_value: post-selection is orthogonal to the state");
  }
  return f.dot(as_two_particle(op).matrix() * pre.amplitudes()) / overlap;
}

CMatrix propagator(const Operator& hamiltonian, double t) {
  if (!hamiltonian.is_hermitian()) throw std::invalid_argument("hamiltonian is not Hermitian");
  const CMatrix& h = hamiltonian.matrix();
  CMatrix u;
  if (hamiltonian.dim() == 2) {
    // H = a0 + a.sigma  =>  exp(-iHt) = exp(-i a0 t) (cos|a|t - i sin|a|t a^.sigma)
    const double a0 = 0.5 * (h(0, 0) + h(1, 1)).real();
    const double ax = h(1, 0).real();
    const double ay = h(1, 0).imag();
    const double az = 0.5 * (h(0, 0) - h(1, 1)).real();
    const double a = std::sqrt(ax * ax + ay * ay + az * az);
    const double sinc = a * t == 0.0 ? t : std::sin(a * t) / a;
    const CMatrix adots = ax * pauli_x() + ay * pauli_y() + az * pauli_z();
    u = std::exp(-kI * a0 * t) * (std::cos(a * t) * CMatrix::Identity(2, 2) - kI * sinc * adots);
  } else {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    if (es.info() != Eigen::Success) throw ContractError("eigendecomposition failed");
    const CVector phases = (-kI * t * es.eigenvalues().cast<Complex>()).array().exp();
    u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
  }
  const double err = (u * u.adjoint() - CMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
  if (err > kUnitarityTol) throw ContractError("propagator is not unitary");
  return u;
}

Operator heisenberg_evolve(const Operator& op, const Operator& hamiltonian, double t) {
  Operator h = hamiltonian;
  if (op.dim() == 4 && h.dim() == 2) h = on_a(h);
  if (op.dim() != h.dim()) throw std::invalid_argument("heisenberg_evolve: dimension mismatch");
  const CMatrix u = propagator(h, t);
  return Operator(u.adjoint() * op.matrix() * u);
}

double PathEnsemble::total_probability() const {
  double s = 0.0;
  for (const auto& b : branches) s += b.probability;
  return s;
}

namespace {

const Complex* find_weak_value(const PathBranch& b, const std::string& name) {
  if (!b.weak_values) return nullptr;
  for (const auto& [n, v] : *b.weak_values)
    if (n == name) return &v;
  throw std::invalid_argument("unknown operator name: " + name);
}

}  // namespace

Complex PathEnsemble::weighted_average(const std::string& name) const {
  Complex s = 0.0;
  for (const auto& b : branches)
    if (const Complex* v = find_weak_value(b, name)) s += b.probability * *v;
  return s;
}

std::vector<PathEnsemble> path_ensemble(const QuantumState& state, Angle omega_a, Angle omega_b,
                                        const NamedOperators& ops, const Operator& hamiltonian,
                                        const std::vector<double>& times) {
  require_normalized(state);
  const Operator h = as_two_particle(hamiltonian);
  std::vector<PathEnsemble> out;
  out.reserve(times.size());
  constexpr std::array<std::pair<int, int>, 4> labels{{{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};
  for (double t : times) {
    PathEnsemble ens;
    ens.t = t;
    std::vector<Operator> evolved;
    for (const auto& [name, op] : ops) evolved.push_back(heisenberg_evolve(as_two_particle(op), h, t));
    for (std::size_t k = 0; k < labels.size(); ++k) {
      PathBranch& b = ens.branches[k];
      b.s_a = labels[k].first;
      b.s_b = labels[k].second;
      const PostSelection post{omega_a, b.s_a, omega_b, b.s_b};
      const Complex overlap = post_selection_ket(post).dot(state.amplitudes());
      b.probability = std::norm(overlap);
      if (std::abs(overlap) > kOverlapFloor) {
        std::vector<std::pair<std::string, Complex>> wv;
        for (std::size_t i = 0; i < ops.size(); ++i)
          wv.emplace_back(ops[i].first, weak_value(state, post, evolved[i]));
        b.weak_values = std::move(wv);
      }
    }
    out.push_back(std::move(ens));
  }
  return out;
}

Complex path_correlation(const PathEnsemble& at_t1, const std::string& op1,
                         const PathEnsemble& at_t2, const std::string& op2) {
  Complex s = 0.0;
  for (std::size_t k = 0; k < at_t1.branches.size(); ++k) {
    const Complex* a = find_weak_value(at_t1.branches[k], op1);
    const Complex* b = find_weak_value(at_t2.branches[k], op2);
    if (a && b) s += at_t1.branches[k].probability * std::conj(*a) * *b;
  }
  return s;
}

namespace {

std::vector<double> flatten_rows(const nlohmann::json& j, int dim, const char* field) {
  std::vector<double> out;
  if (!j.is_array()) throw std::invalid_argument(std::string("operator field '") + field + "' must be an array");
  for (const auto& row : j) {
    if (row.is_array()) {
      if (static_cast<int>(row.size()) != dim) throw std::invalid_argument("operator row has wrong length");
      for (const auto& x : row) out.push_back(x.get<double>());
    } else {
      out.push_back(row.get<double>());
    }
  }
  if (static_cast<int>(out.size()) != dim * dim) {
    throw std::invalid_argument(std::string("operator field '") + field + "' has wrong size");
  }
  return out;
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

}  // namespace

Operator operator_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("re")) {
    throw std::invalid_argument("operator JSON needs 'dim' and 're' (and optionally 'im')");
  }
  const int dim = j.at("dim").get<int>();
  require_dim(dim, "operator JSON");
  const auto re = flatten_rows(j.at("re"), dim, "re");
  const auto im = j.contains("im") ? flatten_rows(j.at("im"), dim, "im") : std::vector<double>(re.size(), 0.0);
  CMatrix m(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) m(r, c) = Complex(re[r * dim + c], im[r * dim + c]);
  Operator op(m);
  if (!op.is_hermitian()) throw std::invalid_argument("operator JSON is not Hermitian");
  return op;
}

nlohmann::json operator_to_json(const Operator& op) {
  nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
  for (int r = 0; r < op.dim(); ++r) {
    nlohmann::json rr = nlohmann::json::array(), ii = nlohmann::json::array();
    for (int c = 0; c < op.dim(); ++c) {
      rr.push_back(op.matrix()(r, c).real());
      ii.push_back(op.matrix()(r, c).imag());
    }
    re.push_back(rr);
    im.push_back(ii);
  }
  return {{"dim", op.dim()}, {"re", re}, {"im", im}};
}

Operator load_operator(const std::string& path) { return operator_from_json(read_json_file(path)); }

NamedOperators load_named_operators(const std::string& path) {
  const auto j = read_json_file(path);
  if (!j.is_object()) throw std::invalid_argument(path + ": expected an object of named operators");
  NamedOperators out;
  for (const auto& [name, value] : j.items()) out.emplace_back(name, operator_from_json(value));
  return out;
}

}  // namespace lhv
