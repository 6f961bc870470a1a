#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qdc/core.hpp"

// QRAM query semantics over classical and quantum data, the address-encoding
// unitary used for unary-to-binary compression, and the per-query cost model.
//
// Queries are applied as exact basis permutations on the address/data space;
// no router tree is simulated.
namespace qdc::qram {

enum class DataMode { classical, quantum };

std::string to_string(DataMode mode);

// Database of N = 2^k cells: classical w-bit words, or a quantum state over
// registers D1..DN of w qubits each (D1 holds address 0).
class QramInstance {
 public:
  static QramInstance classical(std::vector<std::uint64_t> data, int word_width);
  static QramInstance quantum(QuantumState cells);
  static QramInstance empty_quantum(std::uint64_t n, int word_width);

  std::uint64_t size() const noexcept { return n_; }
  int address_width() const noexcept { return address_width_; }
  int word_width() const noexcept { return word_width_; }
  DataMode mode() const noexcept { return mode_; }

  const std::vector<std::uint64_t>& data() const;
  const QuantumState& cells() const;

  nlohmann::json to_json() const;
  static QramInstance from_json(const nlohmann::json& doc);

 private:
  QramInstance() = default;

  DataMode mode_ = DataMode::classical;
  std::uint64_t n_ = 0;
  int address_width_ = 0;
  int word_width_ = 0;
  std::vector<std::uint64_t> data_;
  std::optional<QuantumState> cells_;
};

struct QueryRegisters {
  std::string address = "Q1";
  std::string output = "Q2";
  std::string cell_prefix = "D";
};

struct QueryOptions {
  QueryRegisters regs;
  // Apply the XOR unitary even when the output register is not cleared.
  bool permissive = false;
};

// Σα_i|i⟩|0⟩ -> Σα_i|i⟩|x_i⟩, realized as Q2 ^= x_{Q1} (self-inverse).
QuantumState classical_query(const QuantumState& state, const QramInstance& db,
                             const QueryOptions& options = {});

// Conditioned on Q1 = |i⟩, swaps Q2 with cell D_{i+1}. Self-inverse.
QuantumState quantum_query_swap(const QuantumState& state, const QueryOptions& options = {});

QramInstance write(const QramInstance& db, std::uint64_t address, std::uint64_t word);

struct QuantumWrite {
  QramInstance db;        // cells after the swap
  QuantumState returned;  // previous cell content, handed back in Q2
};
QuantumWrite write(const QramInstance& db, std::uint64_t address, const QuantumState& payload);
// Superposed-address write: joint Q1 ⊗ Q2 ⊗ D1..DN state after the swap.
QuantumState write(const QramInstance& db, const QuantumState& address_state,
                   const QuantumState& payload);

enum class SubspacePolicy {
  single_excitation,  // Q1 = |0⟩ and exactly one cell excited
  allow_vacuum,       // additionally admits the all-zero memory
  permissive,         // no validation
};

// Weight outside {Q1 = 0} ⊗ {single-excitation (or vacuum) memory}.
double subspace_leakage(const QuantumState& state, const QueryRegisters& regs, bool allow_vacuum);

// U: |0⟩_{Q1} ⊗ |one-hot i⟩_D -> |i⟩_{Q1} ⊗ |one-hot i⟩_D, realized as N
// controlled XOR-writes of i into Q1, each controlled on D_{i+1}.
QuantumState encode_address_U(const QuantumState& state,
                              SubspacePolicy policy = SubspacePolicy::single_excitation,
                              const QueryRegisters& regs = {});

// U followed by the swap query with Q2 as the output register.
QuantumState compression_circuit(const QuantumState& joint, SubspacePolicy policy,
                                 const QueryRegisters& regs = {});

struct CompressionResult {
  QuantumState binary;  // Σα_i|i⟩ on Q1
  QuantumState flag;    // |1⟩ on Q2
  QuantumState joint;   // Q1 ⊗ Q2 ⊗ D after the circuit
  double binary_purity = 0.0;
};

// Memory over D1..DN (single qubits, single-excitation support).
CompressionResult compress_unary(const QuantumState& memory);
// Exact inverse of compress_unary: Q1 state -> memory over D1..DN.
QuantumState decompress(const QuantumState& binary, std::uint64_t n);

// Σα_i ⊗_j |δ_ij⟩ over D1..DN.
QuantumState unary_state(std::span<const cplx> alpha);
// Σα_i |i⟩ over Q1.
QuantumState binary_state(std::span<const cplx> alpha, const std::string& reg = "Q1");

struct CostModel {
  double c_magic = 1.0;
  double c_anc = 1.0;
};

struct QueryCost {
  std::uint64_t magic_states = 0;        // ceil(c_magic √N)
  std::uint64_t ancilla_qubits = 0;      // ceil(c_anc √N)
  std::uint64_t transmitted_qubits = 0;  // 2 (log2 N + w), outsourced round trip
  double c_magic = 1.0;
  double c_anc = 1.0;
};

QueryCost query_cost(std::uint64_t n, int word_width, const CostModel& model = {});

// ceil(c·√n) without floating-point noise when c·√n is an integer.
std::uint64_t ceil_scaled_sqrt(std::uint64_t n, double c);

}  // namespace qdc::qram
