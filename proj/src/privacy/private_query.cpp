#include <algorithm>
#include <cmath>

#include "qdc/privacy.hpp"

namespace qdc::privacy {

std::string to_string(AdversaryKind kind) {
  switch (kind) {
    case AdversaryKind::honest: return "honest";
    case AdversaryKind::measuring: return "measuring";
    case AdversaryKind::colluding: return "colluding";
  }
  return "honest";
}

AdversaryKind parse_adversary(const std::string& text) {
  if (text == "honest") return AdversaryKind::honest;
  if (text == "measuring") return AdversaryKind::measuring;
  if (text == "colluding") return AdversaryKind::colluding;
  throw ConfigError("adversary must be honest, measuring or colluding, got '" + text + "'");
}

namespace {

RegisterLayout query_layout(const qram::QramInstance& db) {
  return RegisterLayout{{"Q1", db.address_width()}, {"Q2", db.word_width()}};
}

void check_address(std::uint64_t j, const qram::QramInstance& db) {
  if (j >= db.size()) throw IndexError("query address " + std::to_string(j) + " >= N = " + std::to_string(db.size()));
}

}  // namespace

QuantumState server_answer(const QuantumState& registers, const qram::QramInstance& db,
                           AdversaryKind adversary, Rng& rng) {
  if (adversary == AdversaryKind::measuring)
    return qram::classical_query(measure(registers, "Q1", rng).collapsed, db);
  return qram::classical_query(registers, db);
}

QuantumState plain_query(std::uint64_t j, const qram::QramInstance& db) {
  check_address(j, db);
  const auto layout = query_layout(db);
  return QuantumState::basis(layout, layout.field("Q1").with(0, j));
}

QuantumState decoy_query(std::uint64_t j, const qram::QramInstance& db) {
  check_address(j, db);
  const auto layout = query_layout(db);
  const BitField q1 = layout.field("Q1");
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(layout.dimension()));
  psi[static_cast<Eigen::Index>(q1.with(0, 0))] += 1.0;
  psi[static_cast<Eigen::Index>(q1.with(0, j))] += 1.0;
  return QuantumState::from_amplitudes(layout, std::move(psi), true);
}

QuantumState decoy_expected(std::uint64_t j, const qram::QramInstance& db) {
  return qram::classical_query(decoy_query(j, db), db);
}

QpqResult qpq_run(std::uint64_t j, const qram::QramInstance& db, const QueryServer& server, Rng& rng) {
  if (db.mode() != qram::DataMode::classical) throw PreconditionError("private queries read classical data");
  QpqResult result;
  result.decoy_first = rng.bernoulli(0.5);
  const QuantumState expected = decoy_expected(j, db);
  for (int step = 0; step < 2; ++step) {
    const bool decoy = (step == 0) == result.decoy_first;
    const QuantumState answered = server(decoy ? decoy_query(j, db) : plain_query(j, db));
    if (decoy) {
      result.pass_probability = std::clamp(fidelity(answered, expected), 0.0, 1.0);
      result.verified = rng.uniform() < result.pass_probability;
    } else {
      result.answer = measure(answered, "Q2", rng).value;
    }
  }
  return result;
}

QpqResult qpq_query(std::uint64_t j, const qram::QramInstance& db, AdversaryKind adversary, Rng& rng) {
  return qpq_run(j, db, [&](const QuantumState& q) { return server_answer(q, db, adversary, rng); }, rng);
}

QpqResult qpq_query(std::uint64_t j, const qram::QramInstance& db, AdversaryKind adversary,
                    std::uint64_t seed) {
  Rng rng(seed);
  return qpq_query(j, db, adversary, rng);
}

QuantumState maximally_mixed_probe(int width, const std::string& reg) {
  if (width < 1 || width > 6) throw ConfigError("probe width must lie in [1, 6]");
  const RegisterLayout pairs{{"ref", width}, {reg, width}};
  const std::uint64_t d = std::uint64_t{1} << width;
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(pairs.dimension()));
  for (std::uint64_t x = 0; x < d; ++x) psi[static_cast<Eigen::Index>(x * d + x)] = 1.0 / std::sqrt(static_cast<double>(d));
  return partial_trace(QuantumState::pure_unchecked(pairs, std::move(psi)), {reg});
}

namespace {

bool is_cell_name(const std::string& name) {
  if (name.size() < 2 || name[0] != 'D') return false;
  for (std::size_t i = 1; i < name.size(); ++i)
    if (name[i] < '0' || name[i] > '9') return false;
  return true;
}

QuantumState marginal(const QuantumState& state, const std::vector<std::string>& keep) {
  if (keep.size() == state.layout().registers().size()) return state;
  return partial_trace(state, keep);
}

}  // namespace

SwapRead private_read_swap(const QuantumState& memory, std::uint64_t address, const QuantumState& probe) {
  const auto& mem_layout = memory.layout();
  std::vector<std::string> cells;
  for (const auto& r : mem_layout.registers())
    if (is_cell_name(r.name)) cells.push_back(r.name);
  const std::string target = cell_name(address);
  if (!mem_layout.contains(target))
    throw IndexError("memory has no cell " + target + " for address " + std::to_string(address));
  const int w = mem_layout.width(target);
  if (probe.num_qubits() != w) throw LayoutError("probe width must match the cell width");

  const QuantumState joint_in = tensor(probe.with_layout(RegisterLayout{{"probe", w}}), memory);
  const BitField p = joint_in.layout().field("probe");
  const BitField c = joint_in.layout().field(target);
  const QuantumState joint = permute_basis(joint_in, [&](std::uint64_t i) {
    return c.with(p.with(i, c.get(i)), p.get(i));
  });

  const auto names = mem_layout.names();
  SwapRead out{memory, probe, memory, 0.0};
  std::optional<std::pair<QuantumState, QuantumState>> parts;
  if (joint.is_pure()) parts = split_product(joint, {"probe"});
  if (parts) {
    out.payload = std::move(parts->first);
    out.memory_after = std::move(parts->second);
  } else {
    out.payload = partial_trace(joint, {"probe"});
    out.memory_after = partial_trace(joint, names);
  }
  out.payload = out.payload.with_layout(probe.layout());
  out.database_view = marginal(out.memory_after, cells);
  out.backreaction = trace_distance(marginal(memory, cells), out.database_view);
  return out;
}

}  // namespace qdc::privacy
