#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "qdc/core.hpp"
#include "qdc/netsim.hpp"
#include "qdc/qram.hpp"

// Secret sharing, private queries, mixed-probe swap reads and the end-to-end
// multi-party session built from them.
namespace qdc::privacy {

// ---- secret sharing -------------------------------------------------------

// Pad key for w qubits packed MSB-first as a_0 b_0 a_1 b_1 ... (2w bits);
// qubit q is padded with X^{a_q} Z^{b_q}.
QuantumState apply_pad(const QuantumState& state, std::uint64_t key);
QuantumState remove_pad(const QuantumState& state, std::uint64_t key);

struct Share {
  int index = 0;
  std::optional<QuantumState> quantum;  // only share 0 carries the padded state
  std::uint64_t key = 0;                // additive (XOR) part of the pad key
};

struct ShareSet {
  int n = 0;
  int width = 0;  // secret qubits
  std::vector<Share> shares;

  std::string scheme() const { return "(" + std::to_string(n) + "," + std::to_string(n) + ") one-time-pad"; }
};

ShareSet qss_split(const QuantumState& secret, int n, Rng& rng);
ShareSet qss_split(const QuantumState& secret, int n, std::uint64_t seed);
// Needs every share index 0..n-1 exactly once; ReconstructionError otherwise.
QuantumState qss_reconstruct(const ShareSet& shares);

// Exact view of the shares in `subset`, averaged over every pad and key split:
// the held quantum part (register S, if share 0 is held) followed by one
// 2w-qubit classical register K<i> per held key part.
QuantumState share_view(const QuantumState& secret, int n, const std::vector<int>& subset);

// ---- adversaries and private queries --------------------------------------

enum class AdversaryKind { honest, measuring, colluding };

std::string to_string(AdversaryKind kind);
AdversaryKind parse_adversary(const std::string& text);

struct AdversaryModel {
  AdversaryKind kind = AdversaryKind::honest;
  std::vector<int> colluders;  // QDC indices; empty means the first n
};

// What a server does with incoming Q1 ⊗ Q2: classical_query, preceded by a
// computational-basis measurement of Q1 for the measuring adversary.
QuantumState server_answer(const QuantumState& registers, const qram::QramInstance& db,
                           AdversaryKind adversary, Rng& rng);

// Plain |j⟩ and decoy (|0⟩+|j⟩)/√2 query registers.
QuantumState plain_query(std::uint64_t j, const qram::QramInstance& db);
QuantumState decoy_query(std::uint64_t j, const qram::QramInstance& db);
// Expected honest answer to the decoy: (|0⟩|x_0⟩ + |j⟩|x_j⟩)/√2.
QuantumState decoy_expected(std::uint64_t j, const qram::QramInstance& db);

struct QpqResult {
  std::uint64_t answer = 0;
  bool verified = true;
  bool decoy_first = false;
  double pass_probability = 1.0;  // of the projective check actually applied
};

using QueryServer = std::function<QuantumState(const QuantumState&)>;

// Both queries go through `server` (which may include transport); the plain
// answer is read out of Q2 and the decoy answer is projected onto the
// expected state.
QpqResult qpq_run(std::uint64_t j, const qram::QramInstance& db, const QueryServer& server, Rng& rng);
QpqResult qpq_query(std::uint64_t j, const qram::QramInstance& db, AdversaryKind adversary, Rng& rng);
QpqResult qpq_query(std::uint64_t j, const qram::QramInstance& db, AdversaryKind adversary,
                    std::uint64_t seed);

// ---- swap reads -----------------------------------------------------------

// I/2^w on register `reg`, obtained by tracing half of w Bell pairs.
QuantumState maximally_mixed_probe(int width, const std::string& reg = "Q2");

struct SwapRead {
  QuantumState memory_after;   // memory registers after the swap
  QuantumState payload;        // former content of the addressed cell
  QuantumState database_view;  // D-cell marginal after the read
  double backreaction = 0.0;   // trace distance of the D-cell marginal before/after
};

// Swaps `probe` into cell D_{address+1} of `memory`. The memory may carry
// extra registers (keys, purifications); only cells named D<k> count as the
// database for the backreaction.
SwapRead private_read_swap(const QuantumState& memory, std::uint64_t address, const QuantumState& probe);

// ---- sessions -------------------------------------------------------------

struct SessionConfig {
  int senders = 2;
  int receivers = 2;
  // sender -> receiver; empty means sender i pairs with receiver i.
  std::vector<std::pair<int, int>> pairing;
  int qdc_count = 2;
  int shares = 2;
  int width = 1;
  AdversaryModel adversary;
  std::uint64_t seed = 0;
  // One w-qubit secret per sender; random when empty.
  std::vector<QuantumState> secrets;
  double loss_probability = 0.0;
  bool privacy_metrics = true;

  void validate() const;
};

struct DeliveredFidelity {
  int sender = 0;
  int receiver = 0;
  double fidelity = 0.0;
};

struct QdcPrivacy {
  int qdc = 0;
  // Max trace distance of the QDC's final view across counterfactual
  // secrets, and across counterfactual sender -> receiver matchings.
  std::optional<double> secret_distance;
  std::optional<double> receiver_distance;
};

struct SessionReport {
  std::vector<DeliveredFidelity> delivered;
  std::uint64_t qpq_checks = 0;
  std::uint64_t detection_events = 0;
  // Checks whose decoy superposed two distinct addresses.
  std::uint64_t nondegenerate_checks = 0;
  std::vector<QdcPrivacy> privacy;
  std::vector<std::pair<int, double>> colluder_fidelities;  // (sender, fidelity)
  // Per swap read, on the memory as the server sees it (averaged over the pad).
  std::vector<double> backreactions;
  netsim::NetworkMetrics metrics;
  std::string transcript;  // JSON lines

  double max_privacy_metric() const;
  nlohmann::json to_json() const;
};

SessionReport run_session(const SessionConfig& config);

// Partial injective matchings from `senders` to `receivers`.
std::vector<std::vector<std::pair<int, int>>> partial_matchings(int senders, int receivers);

// QDC holding share s of sender a.
inline int share_holder(int sender, int share, int qdc_count) { return (sender + share) % qdc_count; }

}  // namespace qdc::privacy
