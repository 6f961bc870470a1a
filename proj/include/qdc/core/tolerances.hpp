#pragma once

namespace qdc {

// Every numeric threshold used by the simulator lives here.
struct Tolerances {
  double norm = 1e-10;      // |Σ|a|² - 1| for pure states, |tr ρ - 1| for mixed
  double hermitian = 1e-10;
  double psd = 1e-9;        // smallest admissible eigenvalue is -psd
  double unitary = 1e-12;
  double subspace = 1e-10;  // leaked weight tolerated by subspace-restricted ops
  int max_pure_qubits = 22;
  int max_mixed_qubits = 12;
};

inline constexpr Tolerances kTolerances{};

}  // namespace qdc
