#include <algorithm>
#include <sstream>

#include "qdc/netsim.hpp"

namespace qdc::netsim {

namespace {

std::pair<std::string, std::string> key(const std::string& a, const std::string& b) {
  return a < b ? std::pair{a, b} : std::pair{b, a};
}

}  // namespace

nlohmann::json QdcNode::to_json() const {
  return {{"id", id},         {"N", qram.size()},   {"mode", qram::to_string(qram.mode())},
          {"epsilon", epsilon}, {"tau", tau},       {"throughput", throughput},
          {"apply_noise", apply_noise}};
}

NetworkMetrics NetworkMetrics::operator-(const NetworkMetrics& before) const {
  NetworkMetrics d;
  d.qubits_teleported = qubits_teleported - before.qubits_teleported;
  d.epr_consumed = epr_consumed - before.epr_consumed;
  d.classical_bits_sent = classical_bits_sent - before.classical_bits_sent;
  d.erasures = erasures - before.erasures;
  d.queries_completed = queries_completed - before.queries_completed;
  d.magic_states_shipped = magic_states_shipped - before.magic_states_shipped;
  d.elapsed_time = elapsed_time - before.elapsed_time;
  return d;
}

nlohmann::json NetworkMetrics::to_json() const {
  return {{"qubits_teleported", qubits_teleported},
          {"epr_consumed", epr_consumed},
          {"classical_bits_sent", classical_bits_sent},
          {"erasures", erasures},
          {"queries_completed", queries_completed},
          {"magic_states_shipped", magic_states_shipped},
          {"elapsed_time", elapsed_time}};
}

std::string to_string(QueryMode mode) { return mode == QueryMode::classical ? "classical" : "quantum_swap"; }

QuantumState erase_qubit(const QuantumState& state, int qubit) {
  const int n = state.num_qubits();
  if (qubit < 0 || qubit >= n) throw IndexError("erased qubit out of range");
  const std::uint64_t bit = std::uint64_t{1} << state.layout().shift_of_qubit(qubit);
  const Eigen::MatrixXcd rho = state.density_matrix();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rho.rows(), rho.cols());
  const auto dim = state.dimension();
  for (std::uint64_t c = 0; c < dim; ++c) {
    if (c & bit) continue;
    for (std::uint64_t r = 0; r < dim; ++r) {
      if (r & bit) continue;
      const auto ri = static_cast<Eigen::Index>(r), ci = static_cast<Eigen::Index>(c);
      out(ri, ci) = rho(ri, ci) + rho(static_cast<Eigen::Index>(r | bit), static_cast<Eigen::Index>(c | bit));
    }
  }
  return QuantumState::mixed_unchecked(state.layout(), std::move(out));
}

Network::Network(std::uint64_t seed) : rng_(seed) {}

void Network::add_user(const std::string& id) {
  if (id.empty() || nodes_.contains(id) || !users_.insert(id).second)
    throw ConfigError("duplicate or empty endpoint id '" + id + "'");
}

QdcNode& Network::add_node(QdcNode node) {
  if (node.id.empty() || users_.contains(node.id) || nodes_.contains(node.id))
    throw ConfigError("duplicate or empty endpoint id '" + node.id + "'");
  if (!(node.tau > 0.0)) throw ConfigError("node latency tau must be positive");
  if (!(node.throughput > 0.0)) throw ConfigError("node throughput T must be positive");
  if (node.epsilon < 0.0 || node.epsilon > 1.0) throw ConfigError("node epsilon must lie in [0, 1]");
  const std::string id = node.id;
  return nodes_.emplace(id, std::move(node)).first->second;
}

Channel& Network::connect(const std::string& a, const std::string& b, double loss_probability,
                          double hop_latency) {
  auto known = [&](const std::string& id) { return users_.contains(id) || nodes_.contains(id); };
  if (!known(a) || !known(b) || a == b) throw ConfigError("channel endpoints must be two distinct known ids");
  if (loss_probability < 0.0 || loss_probability >= 1.0) throw ConfigError("loss probability must lie in [0, 1)");
  if (hop_latency < 0.0) throw ConfigError("hop latency must be >= 0");
  auto [it, inserted] = channels_.emplace(key(a, b), Channel{a, b, 0, loss_probability, hop_latency});
  if (!inserted) throw ConfigError("channel " + a + "-" + b + " already exists");
  return it->second;
}

QdcNode& Network::node(const std::string& id) {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw ConfigError("unknown QDC node '" + id + "'");
  return it->second;
}

const QdcNode& Network::node(const std::string& id) const {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw ConfigError("unknown QDC node '" + id + "'");
  return it->second;
}

Channel& Network::channel(const std::string& a, const std::string& b) {
  auto it = channels_.find(key(a, b));
  if (it == channels_.end()) throw ConfigError("no channel between '" + a + "' and '" + b + "'");
  return it->second;
}

const Channel& Network::channel(const std::string& a, const std::string& b) const {
  auto it = channels_.find(key(a, b));
  if (it == channels_.end()) throw ConfigError("no channel between '" + a + "' and '" + b + "'");
  return it->second;
}

void Network::distribute_epr(const std::string& a, const std::string& b, std::uint64_t count) {
  channel(a, b).epr_pool += count;
}

void Network::log(double time, std::string kind, nlohmann::json detail) {
  if (!logging_) return;
  events_.push_back({time, events_.size(), std::move(kind), std::move(detail)});
}

void Network::note(const std::string& kind, nlohmann::json detail) { log(now(), kind, std::move(detail)); }

void Network::send_classical(const std::string& from, const std::string& to, std::uint64_t bits,
                             nlohmann::json detail) {
  const Channel& ch = channel(from, to);
  const double start = now();
  metrics_.classical_bits_sent += bits;
  detail["from"] = from;
  detail["to"] = to;
  detail["bits"] = bits;
  advance_to(start + ch.hop_latency);
  log(start, "classical", std::move(detail));
}

void Network::advance_to(double t) { metrics_.elapsed_time = std::max(metrics_.elapsed_time, t); }

Delivery Network::teleport(const std::string& from, const std::string& to, const QuantumState& state,
                           std::optional<double> at) {
  return teleport_registers(from, to, state, state.layout().names(), at);
}

Delivery Network::teleport_registers(const std::string& from, const std::string& to, const QuantumState& state,
                                     const std::vector<std::string>& registers, std::optional<double> at) {
  Channel& ch = channel(from, to);
  std::vector<int> qubits;
  for (const auto& name : registers)
    for (int bit = 0; bit < state.layout().width(name); ++bit) qubits.push_back(state.layout().qubit(name, bit));
  const auto n = static_cast<std::uint64_t>(qubits.size());
  if (ch.epr_pool < n)
    throw ResourceError("channel " + from + "-" + to + " holds " + std::to_string(ch.epr_pool) +
                        " EPR pairs, " + std::to_string(n) + " needed");
  const double start = at.value_or(now());
  ch.epr_pool -= n;

  std::string outcomes;
  std::vector<int> erased;
  for (int q : qubits) {
    const auto bits = rng_.below(4);
    outcomes += to_bitstring(bits, 2);
    if (ch.loss_probability > 0.0 && rng_.bernoulli(ch.loss_probability)) erased.push_back(q);
  }
  QuantumState delivered = state;
  for (int q : erased) delivered = erase_qubit(delivered, q);

  metrics_.qubits_teleported += n;
  metrics_.epr_consumed += n;
  metrics_.classical_bits_sent += 2 * n;
  metrics_.erasures += erased.size();
  const double arrival = start + ch.hop_latency;
  advance_to(arrival);
  if (logging_) {
    std::string names;
    for (const auto& r : registers) names += (names.empty() ? "" : ",") + r;
    log(start, "teleport",
        {{"from", from}, {"to", to}, {"qubits", n}, {"registers", names},
         {"bell_outcomes", outcomes}, {"erased", erased}, {"arrival", arrival}});
  }
  return {std::move(delivered), std::move(erased), arrival};
}

QueryOutcome Network::outsourced_query(const std::string& user, const std::string& node_id,
                                       const QuantumState& registers, QueryMode mode,
                                       std::optional<double> issue_time) {
  QdcNode& nd = node(node_id);
  const auto& layout = registers.layout();
  if (layout.registers().size() != 2 || !layout.contains("Q1") || !layout.contains("Q2"))
    throw LayoutError("outsourced queries carry exactly the registers Q1 and Q2");
  if (layout.width("Q1") != nd.qram.address_width())
    throw LayoutError("Q1 must have log2 N = " + std::to_string(nd.qram.address_width()) + " qubits");
  if (layout.width("Q2") != nd.qram.word_width())
    throw LayoutError("Q2 must have w = " + std::to_string(nd.qram.word_width()) + " qubits");
  const Channel& ch = channel(user, node_id);
  if (ch.epr_pool < 2 * static_cast<std::uint64_t>(layout.total_qubits()))
    throw ResourceError("channel " + user + "-" + node_id + " lacks EPR pairs for a query round trip");

  const NetworkMetrics before = metrics_;
  const double issued = issue_time.value_or(now());
  auto out = teleport(user, node_id, registers, issued);

  const double start = std::max(out.arrival, nd.busy_until);
  nd.busy_until = start + 1.0 / nd.throughput;
  const double done = start + nd.tau;
  log(start, "query_start", {{"node", node_id}, {"user", user}, {"mode", to_string(mode)}});

  QuantumState answered = out.state;
  bool product = true;
  if (mode == QueryMode::classical) {
    answered = qram::classical_query(out.state, nd.qram);
  } else {
    if (nd.qram.mode() != qram::DataMode::quantum) throw PreconditionError("swap query on a classical QRAM");
    const QuantumState joint = qram::quantum_query_swap(tensor(out.state, nd.qram.cells()));
    const auto cells = cell_names(nd.qram.size());
    std::optional<std::pair<QuantumState, QuantumState>> parts;
    if (joint.is_pure()) parts = split_product(joint, {"Q1", "Q2"});
    if (parts) {
      answered = std::move(parts->first);
      nd.qram = qram::QramInstance::quantum(std::move(parts->second));
    } else {
      product = false;
      answered = partial_trace(joint, {"Q1", "Q2"});
      nd.qram = qram::QramInstance::quantum(partial_trace(joint, cells));
    }
  }
  if (nd.apply_noise && nd.epsilon > 0.0)
    for (int q = 0; q < answered.num_qubits(); ++q) answered = depolarize(answered, q, nd.epsilon);
  log(done, "query_done", {{"node", node_id}, {"user", user}, {"product_with_memory", product}});
  advance_to(done);

  auto back = teleport(node_id, user, answered, done);
  metrics_.queries_completed += 1;
  return {std::move(back.state), product, issued, back.arrival, metrics_ - before};
}

NetworkMetrics Network::naive_magic_shipping(const std::string& user, const std::string& node_id,
                                             std::uint64_t query_n, const qram::CostModel& model) {
  QdcNode& nd = node(node_id);
  channel(user, node_id);
  const NetworkMetrics before = metrics_;
  const auto m = qram::query_cost(query_n, 1, model).magic_states;
  metrics_.qubits_teleported += m;
  metrics_.epr_consumed += m;
  metrics_.classical_bits_sent += 2 * m;
  metrics_.magic_states_shipped += m;
  const double start = now();
  const double end = start + static_cast<double>(m) / nd.throughput;
  advance_to(end);
  log(start, "magic_shipping", {{"node", node_id}, {"user", user}, {"N", query_n}, {"magic_states", m}});
  return metrics_ - before;
}

std::vector<Event> Network::events() const {
  std::vector<Event> sorted = events_;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const Event& x, const Event& y) { return x.time < y.time; });
  return sorted;
}

std::string Network::event_log_jsonl() const {
  std::ostringstream out;
  for (const auto& e : events()) {
    nlohmann::json line = {{"t", e.time}, {"seq", e.seq}, {"kind", e.kind}};
    for (const auto& [k, v] : e.detail.items()) line[k] = v;
    out << line.dump() << '\n';
  }
  return out.str();
}

}  // namespace qdc::netsim
