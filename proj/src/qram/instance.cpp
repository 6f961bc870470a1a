#include <cmath>
#include <set>

#include "qdc/qram.hpp"

namespace qdc::qram {

std::string to_string(DataMode mode) { return mode == DataMode::classical ? "classical" : "quantum"; }

QramInstance QramInstance::classical(std::vector<std::uint64_t> data, int word_width) {
  if (data.size() < 2 || !is_power_of_two(data.size()))
    throw ConfigError("QRAM size must be a power of two >= 2, got " + std::to_string(data.size()));
  if (word_width < 1 || word_width > 16) throw ConfigError("word width must lie in [1, 16]");
  for (auto x : data)
    if (x >> word_width) throw ConfigError("data word " + std::to_string(x) + " exceeds the word width");
  QramInstance db;
  db.mode_ = DataMode::classical;
  db.n_ = data.size();
  db.address_width_ = log2_exact(db.n_);
  db.word_width_ = word_width;
  db.data_ = std::move(data);
  return db;
}

QramInstance QramInstance::quantum(QuantumState cells) {
  const auto& regs = cells.layout().registers();
  if (regs.size() < 2 || !is_power_of_two(regs.size()))
    throw ConfigError("quantum memory must hold a power-of-two number of cells >= 2");
  const int w = regs.front().width;
  for (std::size_t i = 0; i < regs.size(); ++i) {
    if (regs[i].name != cell_name(i))
      throw LayoutError("quantum memory registers must be named D1..DN in order, got " +
                        cells.layout().describe());
    if (regs[i].width != w) throw LayoutError("all memory cells must have the same width");
  }
  QramInstance db;
  db.mode_ = DataMode::quantum;
  db.n_ = regs.size();
  db.address_width_ = log2_exact(db.n_);
  db.word_width_ = w;
  db.cells_ = std::move(cells);
  return db;
}

QramInstance QramInstance::empty_quantum(std::uint64_t n, int word_width) {
  if (n < 2 || !is_power_of_two(n)) throw ConfigError("QRAM size must be a power of two >= 2");
  std::vector<Register> regs;
  for (const auto& name : cell_names(n)) regs.push_back({name, word_width});
  return quantum(QuantumState::basis(RegisterLayout(std::move(regs)), std::uint64_t{0}));
}

const std::vector<std::uint64_t>& QramInstance::data() const {
  if (mode_ != DataMode::classical) throw PreconditionError("quantum QRAM has no classical data");
  return data_;
}

const QuantumState& QramInstance::cells() const {
  if (mode_ != DataMode::quantum) throw PreconditionError("classical QRAM has no quantum cells");
  return *cells_;
}

nlohmann::json QramInstance::to_json() const {
  nlohmann::json doc{{"N", n_}, {"mode", to_string(mode_)}, {"word_width", word_width_}};
  if (mode_ == DataMode::classical) {
    doc["data"] = data_;
    return doc;
  }
  if (!cells_->is_pure()) throw PreconditionError("only pure quantum memories serialize to JSON");
  auto amps = nlohmann::json::array();
  for (const auto& a : cells_->amplitudes()) amps.push_back({a.real(), a.imag()});
  doc["data"] = std::move(amps);
  return doc;
}

QramInstance QramInstance::from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("QRAM document must be a JSON object");
  static const std::set<std::string> known{"N", "mode", "word_width", "data"};
  for (const auto& [key, _] : doc.items())
    if (!known.contains(key)) throw ConfigError("unknown QRAM key '" + key + "'");
  for (const auto& key : known)
    if (!doc.contains(key)) throw ConfigError("QRAM document is missing '" + key + "'");
  try {
    const auto n = doc.at("N").get<std::uint64_t>();
    const auto w = doc.at("word_width").get<int>();
    const auto mode = doc.at("mode").get<std::string>();
    if (mode == "classical") {
      auto data = doc.at("data").get<std::vector<std::uint64_t>>();
      if (data.size() != n) throw ConfigError("QRAM data length does not match N");
      return classical(std::move(data), w);
    }
    if (mode == "quantum") {
      if (n < 2 || !is_power_of_two(n)) throw ConfigError("QRAM size must be a power of two >= 2");
      std::vector<Register> regs;
      for (const auto& name : cell_names(n)) regs.push_back({name, w});
      RegisterLayout layout(std::move(regs));
      const auto& data = doc.at("data");
      if (data.size() != layout.dimension()) throw ConfigError("quantum QRAM amplitude count mismatch");
      Eigen::VectorXcd amps(static_cast<Eigen::Index>(data.size()));
      for (std::size_t i = 0; i < data.size(); ++i)
        amps[static_cast<Eigen::Index>(i)] = cplx(data[i].at(0).get<double>(), data[i].at(1).get<double>());
      return quantum(QuantumState::from_amplitudes(layout, std::move(amps)));
    }
    throw ConfigError("QRAM mode must be 'classical' or 'quantum', got '" + mode + "'");
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed QRAM document: ") + e.what());
  }
}

QramInstance write(const QramInstance& db, std::uint64_t address, std::uint64_t word) {
  if (db.mode() != DataMode::classical) throw PreconditionError("word write on a quantum QRAM");
  if (address >= db.size())
    throw IndexError("address " + std::to_string(address) + " >= N = " + std::to_string(db.size()));
  auto data = db.data();
  data[address] = word;
  return QramInstance::classical(std::move(data), db.word_width());
}

namespace {

QuantumState as_register(const QuantumState& s, const std::string& name, int width) {
  if (s.num_qubits() != width)
    throw LayoutError("expected a " + std::to_string(width) + "-qubit state for register " + name);
  return s.with_layout(RegisterLayout{{name, width}});
}

}  // namespace

QuantumWrite write(const QramInstance& db, std::uint64_t address, const QuantumState& payload) {
  if (db.mode() != DataMode::quantum) throw PreconditionError("quantum write on a classical QRAM");
  if (address >= db.size())
    throw IndexError("address " + std::to_string(address) + " >= N = " + std::to_string(db.size()));
  const QuantumState addr = QuantumState::basis(RegisterLayout{{"Q1", db.address_width()}}, address);
  const QuantumState joint = write(db, addr, payload);
  const QuantumState rest = condition_on(joint, {{"Q1", address}}).state;

  if (auto parts = split_product(rest, {"Q2"})) {
    return {QramInstance::quantum(std::move(parts->second)), std::move(parts->first)};
  }
  return {QramInstance::quantum(partial_trace(rest, cell_names(db.size()))),
          partial_trace(rest, {"Q2"})};
}

QuantumState write(const QramInstance& db, const QuantumState& address_state,
                   const QuantumState& payload) {
  if (db.mode() != DataMode::quantum) throw PreconditionError("quantum write on a classical QRAM");
  const QuantumState q1 = as_register(address_state, "Q1", db.address_width());
  const QuantumState q2 = as_register(payload, "Q2", db.word_width());
  return quantum_query_swap(tensor(tensor(q1, q2), db.cells()));
}

std::uint64_t ceil_scaled_sqrt(std::uint64_t n, double c) {
  if (c <= 0.0) throw ConfigError("cost constants must be positive");
  const double v = c * std::sqrt(static_cast<double>(n));
  const double r = std::round(v);
  if (std::abs(v - r) < 1e-9 * std::max(1.0, r)) return static_cast<std::uint64_t>(r);
  return static_cast<std::uint64_t>(std::ceil(v));
}

QueryCost query_cost(std::uint64_t n, int word_width, const CostModel& model) {
  const int k = log2_exact(n);
  if (word_width < 1) throw ConfigError("word width must be positive");
  QueryCost cost;
  cost.c_magic = model.c_magic;
  cost.c_anc = model.c_anc;
  cost.magic_states = ceil_scaled_sqrt(n, model.c_magic);
  cost.ancilla_qubits = ceil_scaled_sqrt(n, model.c_anc);
  cost.transmitted_qubits = 2 * static_cast<std::uint64_t>(k + word_width);
  return cost;
}

}  // namespace qdc::qram
