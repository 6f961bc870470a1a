#pragma once

#include <vector>

#include <Eigen/Dense>

#include "qdc/core/state.hpp"

namespace qdc {

enum class GateKind { X, Z, H, S, T, CNOT, Toffoli, CSWAP, ControlledPhase, Unitary1 };

// A gate acting on global qubit indices. For controlled gates the controls
// come first in `targets`: CNOT {c, t}, Toffoli {c1, c2, t}, CSWAP {c, a, b},
// ControlledPhase {c, t}.
struct GateOp {
  GateKind kind = GateKind::X;
  std::vector<int> targets;
  double theta = 0.0;           // ControlledPhase only
  Eigen::Matrix2cd unitary;     // Unitary1 only

  static GateOp x(int q) { return {GateKind::X, {q}, 0.0, {}}; }
  static GateOp z(int q) { return {GateKind::Z, {q}, 0.0, {}}; }
  static GateOp h(int q) { return {GateKind::H, {q}, 0.0, {}}; }
  static GateOp s(int q) { return {GateKind::S, {q}, 0.0, {}}; }
  static GateOp t(int q) { return {GateKind::T, {q}, 0.0, {}}; }
  static GateOp cnot(int control, int target) { return {GateKind::CNOT, {control, target}, 0.0, {}}; }
  static GateOp toffoli(int c1, int c2, int target) { return {GateKind::Toffoli, {c1, c2, target}, 0.0, {}}; }
  static GateOp cswap(int control, int a, int b) { return {GateKind::CSWAP, {control, a, b}, 0.0, {}}; }
  static GateOp cphase(int control, int target, double theta);
  static GateOp single(int q, const Eigen::Matrix2cd& u);

  int arity() const;
  // 2^k x 2^k matrix, first target as the most significant index bit.
  Eigen::MatrixXcd matrix() const;
  GateOp inverse() const;
};

Eigen::Matrix2cd pauli_x();
Eigen::Matrix2cd pauli_y();
Eigen::Matrix2cd pauli_z();

// Applies the gate (U ψ or U ρ U†). Throws IndexError on invalid targets.
QuantumState apply(const QuantumState& state, const GateOp& gate);
// Applies an arbitrary unitary on the listed qubits (first = most significant).
QuantumState apply_matrix(const QuantumState& state, const std::vector<int>& qubits,
                          const Eigen::MatrixXcd& u);

}  // namespace qdc
