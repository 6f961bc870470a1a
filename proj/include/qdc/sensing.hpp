#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "qdc/core.hpp"

// Single-photon telescope toy: which-frequency/which-time capture and
// compression, hardware and entanglement accounting, and a two-site phase
// estimation experiment over the simulated network.
namespace qdc::sensing {

// Photon arrival amplitudes a(r, t) over R frequency bands and T_bin time
// bins, stored at index r·T_bin + t.
struct ArrivalModel {
  int bands = 1;     // R
  int time_bins = 2; // T_bin
  std::vector<cplx> amplitudes;
  double phi = 0.0;

  static ArrivalModel single(int bands, int time_bins, int r, int t);
  static ArrivalModel superposition(int bands, int time_bins, std::vector<cplx> amplitudes);
  static ArrivalModel random(int bands, int time_bins, Rng& rng);

  cplx amplitude(int r, int t) const { return amplitudes[static_cast<std::size_t>(r * time_bins + t)]; }
  void validate() const;
};

// Memory D1..DR after step t: the normalized slice a(·, t), or vacuum.
QuantumState capture_step(const ArrivalModel& model, int t);

struct FrequencyCompression {
  QuantumState registers;               // A (log2 R) ⊗ F
  std::optional<QuantumState> address;  // set when A and F are in a product state
  std::optional<QuantumState> flag;
};

// Vacuum maps to A = |0..0⟩, F = |0⟩; excitations to A = |r⟩, F = |1⟩.
FrequencyCompression compress_which_frequency(const QuantumState& memory);

// Controlled on `flag` = |1⟩, XORs t into `time_reg`.
QuantumState encode_which_time(const QuantumState& state, int t, const std::string& flag = "F",
                               const std::string& time_reg = "TIME");

// Coherent capture/compress/encode over all time steps; the result lives on
// FREQ (log2 R) ⊗ TIME (log2 T_bin) ⊗ FLAG after every work register has been
// returned to |0⟩.
QuantumState run_pipeline(const ArrivalModel& model);
// Σ a(r,t) |r⟩|t⟩|1⟩ on the same registers.
QuantumState direct_encoding(const ArrivalModel& model);

struct CostAccount {
  std::uint64_t bands = 0;
  std::uint64_t time_bins = 0;
  std::uint64_t qubits_reference = 0;  // R·log2 T_bin
  std::uint64_t qubits_qdc = 0;        // R + log2 T_bin
  std::uint64_t pairs_unary = 0;       // N = R·T_bin
  std::uint64_t pairs_binary = 0;      // log2 N
  bool comparison_inverted = false;    // qdc > reference

  nlohmann::json to_json() const;
};

CostAccount hardware_cost(std::uint64_t bands, std::uint64_t time_bins);

// M·H(p) qubits.
double schumacher_bound(double messages, double p);

struct PhaseEstimationConfig {
  double phi_true = 0.0;
  int bins = 4;  // N, power of two in [2, 8]
  std::uint64_t shots = 10'000;
  std::uint64_t seed = 0;
  int trials = 16;
  double loss_probability = 0.0;
};

struct PhaseEstimationResult {
  double phi_true = 0.0;
  double phi_est = 0.0;  // first trial
  double rmse = 0.0;     // over all trials
  std::vector<double> estimates;
  std::uint64_t shots = 0;
  int bins = 0;
  std::uint64_t pairs_consumed_per_event = 0;
  std::uint64_t pairs_uncompressed_per_event = 0;
  std::uint64_t events = 0;
  std::uint64_t erasures = 0;
  double p0_exact = 0.0;  // simulated P(outcome 0), averaged over bins

  nlohmann::json to_json() const;
};

// Two-site state (|e_b⟩_L|0⟩_R + e^{iφ}|0⟩_L|e_b⟩_R)/√2 after both sites
// compress which-bin information, on AL ⊗ FL ⊗ AR ⊗ FR.
QuantumState compressed_pair(double phi, int bins, int bin);
// Recombines the two sites' registers; FL then reads 0 with prob (1+cos φ)/2.
QuantumState interfere(const QuantumState& compressed);

// Grid maximum-likelihood estimate from outcome counts; grid step 2π/1024
// restricted to [0, π] because cos φ cannot tell φ from −φ.
double mle_phase(std::uint64_t zeros, std::uint64_t ones);

PhaseEstimationResult phase_estimation_run(const PhaseEstimationConfig& config);

}  // namespace qdc::sensing
