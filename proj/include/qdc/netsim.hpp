#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qdc/core.hpp"
#include "qdc/qram.hpp"

// Discrete-event model of users and QDC nodes joined by teleportation
// channels. Everything is driven by one seeded generator, so two networks
// built with the same seed and fed the same calls produce identical logs.
namespace qdc::netsim {

struct QdcNode {
  std::string id;
  qram::QramInstance qram;
  double epsilon = 0.0;     // per-query error; reported, applied only if apply_noise
  double tau = 1.0;         // latency of one query
  double throughput = 1.0;  // queries per time unit
  bool apply_noise = false;
  double busy_until = 0.0;

  nlohmann::json to_json() const;
};

struct Channel {
  std::string a;
  std::string b;
  std::uint64_t epr_pool = 0;
  double loss_probability = 0.0;
  double hop_latency = 1.0;
};

struct NetworkMetrics {
  std::uint64_t qubits_teleported = 0;
  std::uint64_t epr_consumed = 0;
  std::uint64_t classical_bits_sent = 0;
  std::uint64_t erasures = 0;
  std::uint64_t queries_completed = 0;
  std::uint64_t magic_states_shipped = 0;
  double elapsed_time = 0.0;

  NetworkMetrics operator-(const NetworkMetrics& before) const;
  nlohmann::json to_json() const;
};

struct Event {
  double time = 0.0;
  std::uint64_t seq = 0;
  std::string kind;
  nlohmann::json detail;
};

struct Delivery {
  QuantumState state;
  std::vector<int> erased;  // global qubit indices reset to |0⟩
  double arrival = 0.0;
};

enum class QueryMode { classical, quantum_swap };

std::string to_string(QueryMode mode);

struct QueryOutcome {
  QuantumState registers;  // Q1 ⊗ Q2 back at the user
  // Quantum mode only: false when the returned registers were left entangled
  // with the node's memory, in which case both sides keep their marginals.
  bool product_with_memory = true;
  double issued = 0.0;
  double completed = 0.0;
  NetworkMetrics delta;
};

class Network {
 public:
  explicit Network(std::uint64_t seed = 0);

  void add_user(const std::string& id);
  QdcNode& add_node(QdcNode node);
  Channel& connect(const std::string& a, const std::string& b, double loss_probability = 0.0,
                   double hop_latency = 1.0);

  bool has_node(const std::string& id) const { return nodes_.contains(id); }
  QdcNode& node(const std::string& id);
  const QdcNode& node(const std::string& id) const;
  Channel& channel(const std::string& a, const std::string& b);
  const Channel& channel(const std::string& a, const std::string& b) const;

  void distribute_epr(const std::string& a, const std::string& b, std::uint64_t count);

  // Teleports every qubit of `state`; starts at `at` (default: current clock).
  // Lost qubits become flagged erasures reset to |0⟩. All-or-nothing on the
  // EPR pool: throws ResourceError before touching anything.
  Delivery teleport(const std::string& from, const std::string& to, const QuantumState& state,
                    std::optional<double> at = std::nullopt);

  // Teleports only the named registers of a joint state (the rest stays put);
  // ideal transfer is the identity on the joint state.
  Delivery teleport_registers(const std::string& from, const std::string& to, const QuantumState& state,
                              const std::vector<std::string>& registers,
                              std::optional<double> at = std::nullopt);

  // Q1 ⊗ Q2 round trip through node `node_id`. Q1 must have log2 N qubits
  // and Q2 the node's word width.
  QueryOutcome outsourced_query(const std::string& user, const std::string& node_id,
                                const QuantumState& registers, QueryMode mode,
                                std::optional<double> issue_time = std::nullopt);

  // Counter-only model of streaming ceil(c_magic √N) magic states to the user.
  NetworkMetrics naive_magic_shipping(const std::string& user, const std::string& node_id,
                                      std::uint64_t query_n, const qram::CostModel& model = {});

  // Classical message over the channel's side link; counts bits, takes one hop.
  void send_classical(const std::string& from, const std::string& to, std::uint64_t bits,
                      nlohmann::json detail = nlohmann::json::object());

  // Appends a protocol-level event to the transcript at the current clock.
  void note(const std::string& kind, nlohmann::json detail);

  // Long Monte Carlo loops may switch the transcript off; counters still run.
  void set_event_logging(bool on) { logging_ = on; }

  const NetworkMetrics& metrics() const { return metrics_; }
  double now() const { return metrics_.elapsed_time; }
  Rng& rng() { return rng_; }

  // Events ordered by (time, insertion order), one JSON object per line.
  std::string event_log_jsonl() const;
  std::vector<Event> events() const;

 private:
  void log(double time, std::string kind, nlohmann::json detail);
  void advance_to(double t);

  Rng rng_;
  std::set<std::string> users_;
  std::map<std::string, QdcNode> nodes_;
  std::map<std::pair<std::string, std::string>, Channel> channels_;
  NetworkMetrics metrics_;
  std::vector<Event> events_;
  bool logging_ = true;
};

// Resets one qubit to |0⟩, discarding its content: ρ -> |0⟩⟨0| ⊗ tr_q ρ.
QuantumState erase_qubit(const QuantumState& state, int qubit);

}  // namespace qdc::netsim
