#pragma once

#include <cassert>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qdc/core/rng.hpp"
#include "qdc/core/state.hpp"

namespace qdc {

// Applies the basis permutation |i⟩ -> |map(i)⟩ (P ρ Pᵀ for mixed states).
// `map` must be a bijection on [0, dim).
template <class Map>
QuantumState permute_basis(const QuantumState& state, Map&& map) {
  const std::uint64_t dim = state.dimension();
#ifndef NDEBUG
  std::vector<bool> hit(dim, false);
  for (std::uint64_t i = 0; i < dim; ++i) {
    const std::uint64_t j = map(i);
    assert(j < dim && !hit[j]);
    hit[j] = true;
  }
#endif
  if (state.is_pure()) {
    // Zero amplitudes map onto zero amplitudes, so only the support is visited.
    const auto& in = state.amplitudes();
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
    for (std::uint64_t i = 0; i < dim; ++i) {
      const cplx a = in[static_cast<Eigen::Index>(i)];
      if (a != cplx(0.0)) out[static_cast<Eigen::Index>(map(i))] = a;
    }
    return QuantumState::pure_unchecked(state.layout(), std::move(out));
  }
  std::vector<std::uint64_t> image(dim);
  for (std::uint64_t i = 0; i < dim; ++i) image[i] = map(i);
  const auto& in = state.density();
  Eigen::MatrixXcd out(in.rows(), in.cols());
  for (std::uint64_t c = 0; c < dim; ++c) {
    const auto oc = static_cast<Eigen::Index>(image[c]);
    for (std::uint64_t r = 0; r < dim; ++r) out(static_cast<Eigen::Index>(image[r]), oc) = in(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  }
  return QuantumState::mixed_unchecked(state.layout(), std::move(out));
}

struct MeasurementResult {
  std::string outcome;  // bitstring, register MSB first
  std::uint64_t value = 0;
  double probability = 0.0;
  QuantumState collapsed;
};

std::vector<double> outcome_probabilities(const QuantumState& state, std::string_view reg);
MeasurementResult measure(const QuantumState& state, std::string_view reg, Rng& rng);
MeasurementResult measure(const QuantumState& state, std::string_view reg, std::uint64_t seed);

// Reduced density matrix over `keep` (ordered as in the state's layout).
QuantumState partial_trace(const QuantumState& state, const std::vector<std::string>& keep);

// Uhlmann fidelity (tr√(√ρ σ √ρ))², equal to |⟨ψ|φ⟩|² for pure states.
double fidelity(const QuantumState& a, const QuantumState& b);
// ½‖ρ − σ‖₁.
double trace_distance(const QuantumState& a, const QuantumState& b);

QuantumState tensor(const QuantumState& a, const QuantumState& b);

struct Conditioned {
  QuantumState state;   // over the remaining registers, renormalized
  double probability;   // weight of the selected branch
};
// Projects the listed registers onto fixed basis values and drops them.
Conditioned condition_on(const QuantumState& state,
                         const std::vector<std::pair<std::string, std::uint64_t>>& fixed);

// Weight of basis states for which `pred(index)` holds.
template <class Pred>
double weight_where(const QuantumState& state, Pred&& pred) {
  double w = 0.0;
  for (std::uint64_t i = 0; i < state.dimension(); ++i)
    if (pred(i)) w += state.probability(i);
  return w;
}

// Returns the pure state when the (mixed) input has purity within tolerance of 1.
std::optional<QuantumState> as_pure(const QuantumState& state, double tol = 1e-9);

// Splits a pure product state into the factor over `first` and the rest.
// Returns nothing when the state is entangled across that cut.
std::optional<std::pair<QuantumState, QuantumState>> split_product(
    const QuantumState& state, const std::vector<std::string>& first, double tol = 1e-9);

// ρ -> (1 − p)ρ + p·(I/2 ⊗ tr_q ρ) on one qubit.
QuantumState depolarize(const QuantumState& state, int qubit, double p);

// Haar-random pure state.
QuantumState random_state(const RegisterLayout& layout, Rng& rng);

}  // namespace qdc
