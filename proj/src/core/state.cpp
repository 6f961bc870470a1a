#include "qdc/core/state.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "qdc/core/errors.hpp"

namespace qdc {

void check_qubit_cap(const RegisterLayout& layout, StateKind kind, const Tolerances& tol) {
  const int cap = kind == StateKind::pure ? tol.max_pure_qubits : tol.max_mixed_qubits;
  if (layout.total_qubits() > cap)
    throw ConfigError(std::string(kind == StateKind::pure ? "pure" : "mixed") + " state on " +
                      std::to_string(layout.total_qubits()) + " qubits exceeds the cap of " +
                      std::to_string(cap));
}

QuantumState QuantumState::basis(const RegisterLayout& layout, std::string_view bits) {
  if (static_cast<int>(bits.size()) != layout.total_qubits())
    throw ConfigError("basis label '" + std::string(bits) + "' has length " +
                      std::to_string(bits.size()) + ", layout has " +
                      std::to_string(layout.total_qubits()) + " qubits");
  return basis(layout, parse_bitstring(bits));
}

QuantumState QuantumState::basis(const RegisterLayout& layout, std::uint64_t index) {
  check_qubit_cap(layout, StateKind::pure);
  if (index >= layout.dimension()) throw IndexError("basis index out of range");
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(layout.dimension()));
  psi[static_cast<Eigen::Index>(index)] = 1.0;
  return pure_unchecked(layout, std::move(psi));
}

QuantumState QuantumState::from_amplitudes(const RegisterLayout& layout, Eigen::VectorXcd amplitudes,
                                           bool normalize) {
  check_qubit_cap(layout, StateKind::pure);
  if (static_cast<std::uint64_t>(amplitudes.size()) != layout.dimension())
    throw ConfigError("amplitude vector has length " + std::to_string(amplitudes.size()) +
                      ", expected " + std::to_string(layout.dimension()));
  if (normalize) {
    const double n = amplitudes.norm();
    if (n == 0.0) throw ConfigError("cannot normalize the zero vector");
    amplitudes /= n;
  }
  auto s = pure_unchecked(layout, std::move(amplitudes));
  s.validate();
  return s;
}

QuantumState QuantumState::from_density(const RegisterLayout& layout, Eigen::MatrixXcd rho) {
  check_qubit_cap(layout, StateKind::mixed);
  const auto dim = static_cast<Eigen::Index>(layout.dimension());
  if (rho.rows() != dim || rho.cols() != dim)
    throw ConfigError("density matrix has the wrong shape for layout " + layout.describe());
  auto s = mixed_unchecked(layout, std::move(rho));
  s.validate();
  return s;
}

QuantumState QuantumState::maximally_mixed(const RegisterLayout& layout) {
  check_qubit_cap(layout, StateKind::mixed);
  const auto dim = static_cast<Eigen::Index>(layout.dimension());
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Identity(dim, dim) / static_cast<double>(dim);
  return mixed_unchecked(layout, std::move(rho));
}

QuantumState QuantumState::pure_unchecked(RegisterLayout layout, Eigen::VectorXcd amplitudes) {
  QuantumState s(StateKind::pure, std::move(layout));
  s.psi_ = std::move(amplitudes);
  return s;
}

QuantumState QuantumState::mixed_unchecked(RegisterLayout layout, Eigen::MatrixXcd rho) {
  QuantumState s(StateKind::mixed, std::move(layout));
  s.rho_ = std::move(rho);
  return s;
}

const Eigen::VectorXcd& QuantumState::amplitudes() const {
  if (!is_pure()) throw PreconditionError("amplitudes requested from a mixed state");
  return psi_;
}

const Eigen::MatrixXcd& QuantumState::density() const {
  if (is_pure()) throw PreconditionError("density requested from a pure state; use density_matrix()");
  return rho_;
}

Eigen::MatrixXcd QuantumState::density_matrix() const {
  if (is_pure()) {
    check_qubit_cap(layout_, StateKind::mixed);
    return psi_ * psi_.adjoint();
  }
  return rho_;
}

QuantumState QuantumState::to_mixed() const {
  if (!is_pure()) return *this;
  return mixed_unchecked(layout_, density_matrix());
}

QuantumState QuantumState::with_layout(RegisterLayout layout) const {
  if (layout.total_qubits() != layout_.total_qubits())
    throw LayoutError("relabeling " + layout_.describe() + " as " + layout.describe() +
                      " changes the qubit count");
  QuantumState s = *this;
  s.layout_ = std::move(layout);
  return s;
}

double QuantumState::trace() const {
  return is_pure() ? psi_.squaredNorm() : rho_.trace().real();
}

double QuantumState::purity() const {
  if (is_pure()) {
    const double n = psi_.squaredNorm();
    return n * n;
  }
  // tr ρ² = Σ |ρ_ij|² for Hermitian ρ.
  return rho_.squaredNorm();
}

double QuantumState::probability(std::uint64_t index) const {
  const auto i = static_cast<Eigen::Index>(index);
  return is_pure() ? std::norm(psi_[i]) : rho_(i, i).real();
}

void QuantumState::validate(const Tolerances& tol) const {
  if (std::abs(trace() - 1.0) > tol.norm)
    throw PreconditionError("state is not normalized (trace " + std::to_string(trace()) + ")");
  if (is_pure()) return;
  if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > tol.hermitian)
    throw PreconditionError("density matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol.psd)
    throw PreconditionError("density matrix is not positive semidefinite");
}

}  // namespace qdc
