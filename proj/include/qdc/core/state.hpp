#pragma once

#include <complex>
#include <cstdint>
#include <string_view>

#include <Eigen/Dense>

#include "qdc/core/layout.hpp"
#include "qdc/core/tolerances.hpp"

namespace qdc {

using cplx = std::complex<double>;

enum class StateKind { pure, mixed };

// Pure state vector or density matrix over a named register layout.
//
// Values are immutable from the caller's perspective: every operation in
// this library returns a new state.
class QuantumState {
 public:
  // |bits⟩ on the layout; bits[0] is the most significant qubit.
  static QuantumState basis(const RegisterLayout& layout, std::string_view bits);
  static QuantumState basis(const RegisterLayout& layout, std::uint64_t index);
  static QuantumState from_amplitudes(const RegisterLayout& layout, Eigen::VectorXcd amplitudes,
                                      bool normalize = false);
  static QuantumState from_density(const RegisterLayout& layout, Eigen::MatrixXcd rho);
  static QuantumState maximally_mixed(const RegisterLayout& layout);

  // Skip validation; for kernels whose output is valid by construction.
  static QuantumState pure_unchecked(RegisterLayout layout, Eigen::VectorXcd amplitudes);
  static QuantumState mixed_unchecked(RegisterLayout layout, Eigen::MatrixXcd rho);

  StateKind kind() const noexcept { return kind_; }
  bool is_pure() const noexcept { return kind_ == StateKind::pure; }
  const RegisterLayout& layout() const noexcept { return layout_; }
  int num_qubits() const noexcept { return layout_.total_qubits(); }
  std::uint64_t dimension() const noexcept { return layout_.dimension(); }

  const Eigen::VectorXcd& amplitudes() const;  // pure only
  const Eigen::MatrixXcd& density() const;     // mixed only
  Eigen::MatrixXcd density_matrix() const;     // either kind

  QuantumState to_mixed() const;
  // Same data, registers renamed/regrouped; total width must match.
  QuantumState with_layout(RegisterLayout layout) const;

  double trace() const;
  double purity() const;
  // ⟨index|ρ|index⟩ or |a_index|².
  double probability(std::uint64_t index) const;

  void validate(const Tolerances& tol = kTolerances) const;

 private:
  QuantumState(StateKind kind, RegisterLayout layout) : kind_(kind), layout_(std::move(layout)) {}

  StateKind kind_;
  RegisterLayout layout_;
  Eigen::VectorXcd psi_;
  Eigen::MatrixXcd rho_;
};

void check_qubit_cap(const RegisterLayout& layout, StateKind kind,
                     const Tolerances& tol = kTolerances);

}  // namespace qdc
