#include <bit>
#include <cmath>

#include "qdc/qram.hpp"
#include "qdc/sensing.hpp"

namespace qdc::sensing {

namespace {

void check_dims(int bands, int time_bins) {
  if (bands < 1 || !is_power_of_two(static_cast<std::uint64_t>(bands)))
    throw ConfigError("R must be a power of two >= 1");
  if (time_bins < 2 || !is_power_of_two(static_cast<std::uint64_t>(time_bins)))
    throw ConfigError("T_bin must be a power of two >= 2");
}

std::vector<Register> memory_registers(int bands) {
  std::vector<Register> regs;
  for (const auto& name : cell_names(static_cast<std::uint64_t>(bands))) regs.push_back({name, 1});
  return regs;
}

}  // namespace

ArrivalModel ArrivalModel::single(int bands, int time_bins, int r, int t) {
  check_dims(bands, time_bins);
  if (r < 0 || r >= bands || t < 0 || t >= time_bins) throw IndexError("arrival bin out of range");
  ArrivalModel m{bands, time_bins, std::vector<cplx>(static_cast<std::size_t>(bands * time_bins)), 0.0};
  m.amplitudes[static_cast<std::size_t>(r * time_bins + t)] = 1.0;
  return m;
}

ArrivalModel ArrivalModel::superposition(int bands, int time_bins, std::vector<cplx> amplitudes) {
  check_dims(bands, time_bins);
  if (amplitudes.size() != static_cast<std::size_t>(bands * time_bins))
    throw ConfigError("arrival amplitudes must have R·T_bin entries");
  double norm = 0.0;
  for (const auto& a : amplitudes) norm += std::norm(a);
  if (norm <= 0.0) throw ConfigError("arrival amplitudes are all zero");
  for (auto& a : amplitudes) a /= std::sqrt(norm);
  return {bands, time_bins, std::move(amplitudes), 0.0};
}

ArrivalModel ArrivalModel::random(int bands, int time_bins, Rng& rng) {
  std::vector<cplx> amps(static_cast<std::size_t>(bands * time_bins));
  for (auto& a : amps) {
    const double re = rng.normal();
    a = cplx(re, rng.normal());
  }
  return superposition(bands, time_bins, std::move(amps));
}

void ArrivalModel::validate() const {
  check_dims(bands, time_bins);
  if (amplitudes.size() != static_cast<std::size_t>(bands * time_bins))
    throw ConfigError("arrival amplitudes must have R·T_bin entries");
  double norm = 0.0;
  for (const auto& a : amplitudes) norm += std::norm(a);
  if (std::abs(norm - 1.0) > kTolerances.norm) throw ConfigError("arrival amplitudes are not normalized");
}

QuantumState capture_step(const ArrivalModel& model, int t) {
  model.validate();
  if (t < 0 || t >= model.time_bins) throw IndexError("time step out of range");
  const RegisterLayout layout(memory_registers(model.bands));
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(layout.dimension()));
  double norm = 0.0;
  for (int r = 0; r < model.bands; ++r) {
    psi[Eigen::Index{1} << (model.bands - 1 - r)] = model.amplitude(r, t);
    norm += std::norm(model.amplitude(r, t));
  }
  if (norm < 1e-24) return QuantumState::basis(layout, std::uint64_t{0});
  return QuantumState::from_amplitudes(layout, std::move(psi), true);
}

FrequencyCompression compress_which_frequency(const QuantumState& memory) {
  const auto r = static_cast<std::uint64_t>(memory.layout().registers().size());
  if (r < 2 || !is_power_of_two(r)) throw LayoutError("frequency memory must hold R = 2^k >= 2 cells");
  if (memory.layout() != RegisterLayout(memory_registers(static_cast<int>(r))))
    throw LayoutError("frequency memory must be single-qubit cells D1..DR");
  const int k = log2_exact(r);
  const QuantumState work = tensor(QuantumState::basis(RegisterLayout{{"Q1", k}, {"Q2", 1}}, std::uint64_t{0}), memory);
  const QuantumState after = qram::compression_circuit(work, qram::SubspacePolicy::allow_vacuum);

  std::vector<std::pair<std::string, std::uint64_t>> cleared;
  for (const auto& name : cell_names(r)) cleared.emplace_back(name, 0);
  auto kept = condition_on(after, cleared);
  if (std::abs(1.0 - kept.probability) > kTolerances.subspace)
    throw SubspaceViolation("compression left excitations in memory", 1.0 - kept.probability);

  FrequencyCompression out{kept.state.with_layout(RegisterLayout{{"A", k}, {"F", 1}}), std::nullopt, std::nullopt};
  if (out.registers.is_pure()) {
    if (auto parts = split_product(out.registers, {"A"})) {
      out.address = std::move(parts->first);
      out.flag = std::move(parts->second);
    }
  }
  return out;
}

QuantumState encode_which_time(const QuantumState& state, int t, const std::string& flag,
                               const std::string& time_reg) {
  const BitField f = state.layout().field(flag);
  const BitField tr = state.layout().field(time_reg);
  if (f.width != 1) throw LayoutError("flag register must be a single qubit");
  if (t < 0 || static_cast<std::uint64_t>(t) > tr.low_mask()) throw IndexError("time value does not fit the time register");
  const auto tv = static_cast<std::uint64_t>(t);
  return permute_basis(state, [&](std::uint64_t i) { return f.get(i) ? tr.with(i, tr.get(i) ^ tv) : i; });
}

QuantumState direct_encoding(const ArrivalModel& model) {
  model.validate();
  const int k = log2_exact(static_cast<std::uint64_t>(model.bands));
  const int tw = log2_exact(static_cast<std::uint64_t>(model.time_bins));
  const RegisterLayout layout{{"FREQ", k}, {"TIME", tw}, {"FLAG", 1}};
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(layout.dimension()));
  for (int r = 0; r < model.bands; ++r)
    for (int t = 0; t < model.time_bins; ++t)
      psi[static_cast<Eigen::Index>((((static_cast<std::uint64_t>(r) << tw) | static_cast<std::uint64_t>(t)) << 1) | 1U)] =
          model.amplitude(r, t);
  return QuantumState::from_amplitudes(layout, std::move(psi));
}

QuantumState run_pipeline(const ArrivalModel& model) {
  model.validate();
  if (model.bands < 2) throw ConfigError("the pipeline needs R >= 2 frequency bands");
  const int bands = model.bands;
  const int tb = model.time_bins;
  const int k = log2_exact(static_cast<std::uint64_t>(bands));
  const int tw = log2_exact(static_cast<std::uint64_t>(tb));
  const int pw = std::bit_width(static_cast<std::uint64_t>(bands * tb));

  // P holds the photon still in flight: 0 once absorbed, else 1 + r·T_bin + t.
  std::vector<Register> regs{{"P", pw}};
  for (const auto& r : memory_registers(bands)) regs.push_back(r);
  for (Register r : {Register{"FREQ", k}, Register{"S", 1}, Register{"TIME", tw}, Register{"FLAG", 1}})
    regs.push_back(r);
  const RegisterLayout layout(regs);
  check_qubit_cap(layout, StateKind::pure);

  const BitField p = layout.field("P");
  std::vector<BitField> cells;
  std::uint64_t cell_mask = 0;
  for (const auto& name : cell_names(static_cast<std::uint64_t>(bands))) {
    cells.push_back(layout.field(name));
    cell_mask |= cells.back().mask();
  }
  const BitField s = layout.field("S");
  const BitField time = layout.field("TIME");
  const BitField flag = layout.field("FLAG");

  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(layout.dimension()));
  for (int r = 0; r < bands; ++r)
    for (int t = 0; t < tb; ++t)
      psi[static_cast<Eigen::Index>(p.with(0, static_cast<std::uint64_t>(1 + r * tb + t)))] = model.amplitude(r, t);
  QuantumState state = QuantumState::from_amplitudes(layout, std::move(psi));

  const qram::QueryRegisters qregs{"FREQ", "S", "D"};
  qram::QueryOptions swap_opts;
  swap_opts.regs = qregs;
  for (int t = 0; t < tb; ++t) {
    // Absorb a photon in flight at bin (r, t) into memory cell r.
    state = permute_basis(state, [&](std::uint64_t i) {
      const std::uint64_t pv = p.get(i);
      if (pv != 0 && pv <= static_cast<std::uint64_t>(bands * tb) && (i & cell_mask) == 0 &&
          static_cast<int>((pv - 1) % tb) == t) {
        const auto r = (pv - 1) / static_cast<std::uint64_t>(tb);
        return cells[r].with(p.with(i, 0), 1);
      }
      if (pv == 0 && std::popcount(i & cell_mask) == 1) {
        for (std::uint64_t r = 0; r < cells.size(); ++r)
          if (cells[r].get(i)) return cells[r].with(p.with(i, 1 + r * static_cast<std::uint64_t>(tb) + static_cast<std::uint64_t>(t)), 0);
      }
      return i;
    });
    state = qram::encode_address_U(state, qram::SubspacePolicy::permissive, qregs);
    state = qram::quantum_query_swap(state, swap_opts);
    state = encode_which_time(state, t, "S", "TIME");
    state = permute_basis(state, [&](std::uint64_t i) { return flag.with(i, flag.get(i) ^ s.get(i)); });
    state = permute_basis(state, [&](std::uint64_t i) {
      const bool here = flag.get(i) == 1 && time.get(i) == static_cast<std::uint64_t>(t);
      return here ? s.with(i, s.get(i) ^ 1U) : i;
    });
  }

  std::vector<std::pair<std::string, std::uint64_t>> cleared{{"P", 0}, {"S", 0}};
  for (const auto& name : cell_names(static_cast<std::uint64_t>(bands))) cleared.emplace_back(name, 0);
  auto out = condition_on(state, cleared);
  if (std::abs(1.0 - out.probability) > kTolerances.subspace)
    throw PreconditionError("pipeline failed to return its work registers to |0⟩");
  return out.state;
}

nlohmann::json CostAccount::to_json() const {
  return {{"R", bands},
          {"T_bin", time_bins},
          {"qubits_reference", qubits_reference},
          {"qubits_qdc", qubits_qdc},
          {"entangled_pairs_unary", pairs_unary},
          {"entangled_pairs_binary", pairs_binary},
          {"comparison_inverted", comparison_inverted}};
}

CostAccount hardware_cost(std::uint64_t bands, std::uint64_t time_bins) {
  if (bands < 1 || !is_power_of_two(bands)) throw ConfigError("R must be a power of two >= 1");
  if (time_bins < 2 || !is_power_of_two(time_bins)) throw ConfigError("T_bin must be a power of two >= 2");
  const auto lt = static_cast<std::uint64_t>(log2_exact(time_bins));
  CostAccount c;
  c.bands = bands;
  c.time_bins = time_bins;
  c.qubits_reference = bands * lt;
  c.qubits_qdc = bands + lt;
  c.pairs_unary = bands * time_bins;
  c.pairs_binary = static_cast<std::uint64_t>(log2_exact(bands * time_bins));
  c.comparison_inverted = c.qubits_qdc > c.qubits_reference;
  return c;
}

double schumacher_bound(double messages, double p) {
  if (messages < 0.0) throw ConfigError("message count must be >= 0");
  if (p < 0.0 || p > 1.0) throw ConfigError("p must lie in [0, 1]");
  auto h = [](double x) { return x <= 0.0 ? 0.0 : -x * std::log2(x); };
  return messages * (h(p) + h(1.0 - p));
}

}  // namespace qdc::sensing
