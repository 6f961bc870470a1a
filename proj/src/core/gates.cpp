#include "qdc/core/gates.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qdc/core/errors.hpp"

namespace qdc {

namespace {

constexpr cplx kI{0.0, 1.0};

// Treats every column of `m` as a state vector on `n` qubits and applies `u`
// to the listed qubits (first = most significant bit of u's index).
void apply_to_columns(Eigen::MatrixXcd& m, int n, const std::vector<int>& qubits,
                      const Eigen::MatrixXcd& u) {
  const int k = static_cast<int>(qubits.size());
  const std::uint64_t block = std::uint64_t{1} << k;
  std::vector<std::uint64_t> offsets(block, 0);
  std::uint64_t target_mask = 0;
  for (int q = 0; q < k; ++q) {
    const std::uint64_t bit = std::uint64_t{1} << (n - 1 - qubits[static_cast<std::size_t>(q)]);
    target_mask |= bit;
    for (std::uint64_t j = 0; j < block; ++j)
      if ((j >> (k - 1 - q)) & 1U) offsets[j] |= bit;
  }
  const std::uint64_t dim = std::uint64_t{1} << n;
  Eigen::VectorXcd in(static_cast<Eigen::Index>(block));
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    auto col = m.col(c);
    for (std::uint64_t base = 0; base < dim; ++base) {
      if (base & target_mask) continue;
      for (std::uint64_t j = 0; j < block; ++j)
        in[static_cast<Eigen::Index>(j)] = col[static_cast<Eigen::Index>(base | offsets[j])];
      for (std::uint64_t r = 0; r < block; ++r) {
        cplx acc = 0.0;
        for (std::uint64_t j = 0; j < block; ++j) {
          const cplx g = u(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j));
          if (g != 0.0) acc += g * in[static_cast<Eigen::Index>(j)];
        }
        col[static_cast<Eigen::Index>(base | offsets[r])] = acc;
      }
    }
  }
}

void check_targets(const std::vector<int>& qubits, int n) {
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    if (qubits[i] < 0 || qubits[i] >= n)
      throw IndexError("qubit index " + std::to_string(qubits[i]) + " out of range for " +
                       std::to_string(n) + " qubits");
    for (std::size_t j = 0; j < i; ++j)
      if (qubits[j] == qubits[i]) throw IndexError("gate targets must be distinct");
  }
}

}  // namespace

Eigen::Matrix2cd pauli_x() {
  Eigen::Matrix2cd m;
  m << 0, 1, 1, 0;
  return m;
}

Eigen::Matrix2cd pauli_y() {
  Eigen::Matrix2cd m;
  m << 0, -kI, kI, 0;
  return m;
}

Eigen::Matrix2cd pauli_z() {
  Eigen::Matrix2cd m;
  m << 1, 0, 0, -1;
  return m;
}

GateOp GateOp::cphase(int control, int target, double theta) {
  GateOp g{GateKind::ControlledPhase, {control, target}, 0.0, {}};
  g.theta = theta;
  return g;
}

GateOp GateOp::single(int q, const Eigen::Matrix2cd& u) {
  GateOp g{GateKind::Unitary1, {q}, 0.0, {}};
  g.unitary = u;
  return g;
}

int GateOp::arity() const {
  switch (kind) {
    case GateKind::CNOT:
    case GateKind::ControlledPhase:
      return 2;
    case GateKind::Toffoli:
    case GateKind::CSWAP:
      return 3;
    default:
      return 1;
  }
}

Eigen::MatrixXcd GateOp::matrix() const {
  const double r = 1.0 / std::numbers::sqrt2;
  switch (kind) {
    case GateKind::X:
      return pauli_x();
    case GateKind::Z:
      return pauli_z();
    case GateKind::H: {
      Eigen::Matrix2cd m;
      m << r, r, r, -r;
      return m;
    }
    case GateKind::S: {
      Eigen::Matrix2cd m;
      m << 1, 0, 0, kI;
      return m;
    }
    case GateKind::T: {
      Eigen::Matrix2cd m;
      m << 1, 0, 0, std::exp(kI * (std::numbers::pi / 4));
      return m;
    }
    case GateKind::CNOT: {
      Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
      m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1;
      return m;
    }
    case GateKind::Toffoli: {
      Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(8, 8);
      m(6, 6) = m(7, 7) = 0;
      m(6, 7) = m(7, 6) = 1;
      return m;
    }
    case GateKind::CSWAP: {
      Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(8, 8);
      m(5, 5) = m(6, 6) = 0;
      m(5, 6) = m(6, 5) = 1;
      return m;
    }
    case GateKind::ControlledPhase: {
      Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(4, 4);
      m(3, 3) = std::exp(kI * theta);
      return m;
    }
    case GateKind::Unitary1:
      return unitary;
  }
  throw ConfigError("unknown gate kind");
}

GateOp GateOp::inverse() const {
  switch (kind) {
    case GateKind::S:
    case GateKind::T:
      return single(targets.at(0), Eigen::Matrix2cd(matrix().adjoint()));
    case GateKind::ControlledPhase:
      return cphase(targets.at(0), targets.at(1), -theta);
    case GateKind::Unitary1:
      return single(targets.at(0), Eigen::Matrix2cd(unitary.adjoint()));
    default:
      return *this;
  }
}

QuantumState apply_matrix(const QuantumState& state, const std::vector<int>& qubits,
                          const Eigen::MatrixXcd& u) {
  const int n = state.num_qubits();
  check_targets(qubits, n);
  const auto block = static_cast<Eigen::Index>(std::uint64_t{1} << qubits.size());
  if (u.rows() != block || u.cols() != block)
    throw ConfigError("gate matrix size does not match the number of target qubits");
  const Eigen::MatrixXcd defect = u.adjoint() * u - Eigen::MatrixXcd::Identity(block, block);
  if (defect.cwiseAbs().maxCoeff() > kTolerances.unitary)
    throw ConfigError("gate matrix is not unitary");

  if (state.is_pure()) {
    Eigen::MatrixXcd psi = state.amplitudes();
    apply_to_columns(psi, n, qubits, u);
    return QuantumState::pure_unchecked(state.layout(), Eigen::VectorXcd(psi.col(0)));
  }
  // ρ' = U ρ U† = (U (U ρ)†)†, using ρ† = ρ along the way.
  Eigen::MatrixXcd rho = state.density();
  apply_to_columns(rho, n, qubits, u);
  Eigen::MatrixXcd tmp = rho.adjoint();
  apply_to_columns(tmp, n, qubits, u);
  return QuantumState::mixed_unchecked(state.layout(), tmp.adjoint());
}

QuantumState apply(const QuantumState& state, const GateOp& gate) {
  if (static_cast<int>(gate.targets.size()) != gate.arity())
    throw ConfigError("gate has " + std::to_string(gate.targets.size()) + " targets, expected " +
                      std::to_string(gate.arity()));
  return apply_matrix(state, gate.targets, gate.matrix());
}

}  // namespace qdc
