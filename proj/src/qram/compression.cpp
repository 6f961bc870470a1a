#include <bit>
#include <cmath>

#include "qdc/qram.hpp"

namespace qdc::qram {

namespace {

struct UnaryView {
  BitField address;
  std::vector<int> cell_shifts;  // one single-qubit cell per address
  std::uint64_t cell_mask = 0;
};

UnaryView unary_view(const RegisterLayout& layout, const QueryRegisters& regs) {
  UnaryView v;
  v.address = layout.field(regs.address);
  const std::uint64_t n = std::uint64_t{1} << v.address.width;
  for (const auto& name : cell_names(n, regs.cell_prefix)) {
    const BitField f = layout.field(name);
    if (f.width != 1) throw LayoutError("compression cells must be single qubits; " + name + " is not");
    v.cell_shifts.push_back(f.shift);
    v.cell_mask |= f.mask();
  }
  return v;
}

void require_subspace(const QuantumState& state, const QueryRegisters& regs, SubspacePolicy policy) {
  if (policy == SubspacePolicy::permissive) return;
  const double leaked = subspace_leakage(state, regs, policy == SubspacePolicy::allow_vacuum);
  if (leaked > kTolerances.subspace)
    throw SubspaceViolation("state is not supported on |0⟩_" + regs.address +
                                " ⊗ single-excitation memory",
                            leaked);
}

}  // namespace

double subspace_leakage(const QuantumState& state, const QueryRegisters& regs, bool allow_vacuum) {
  const UnaryView v = unary_view(state.layout(), regs);
  return weight_where(state, [&](std::uint64_t i) {
    if (v.address.get(i) != 0) return true;
    const int excitations = std::popcount(i & v.cell_mask);
    return !(excitations == 1 || (allow_vacuum && excitations == 0));
  });
}

QuantumState encode_address_U(const QuantumState& state, SubspacePolicy policy,
                              const QueryRegisters& regs) {
  const UnaryView v = unary_view(state.layout(), regs);
  require_subspace(state, regs, policy);
  return permute_basis(state, [&](std::uint64_t i) {
    std::uint64_t acc = 0;
    for (std::uint64_t a = 0; a < v.cell_shifts.size(); ++a)
      if ((i >> v.cell_shifts[a]) & 1U) acc ^= a;
    return v.address.with(i, v.address.get(i) ^ acc);
  });
}

QuantumState compression_circuit(const QuantumState& joint, SubspacePolicy policy,
                                 const QueryRegisters& regs) {
  QueryOptions opts;
  opts.regs = regs;
  return quantum_query_swap(encode_address_U(joint, policy, regs), opts);
}

QuantumState unary_state(std::span<const cplx> alpha) {
  const std::uint64_t n = alpha.size();
  if (n < 2 || !is_power_of_two(n)) throw ConfigError("unary state needs N = 2^k >= 2 amplitudes");
  std::vector<Register> regs;
  for (const auto& name : cell_names(n)) regs.push_back({name, 1});
  RegisterLayout layout(std::move(regs));
  check_qubit_cap(layout, StateKind::pure);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(layout.dimension()));
  for (std::uint64_t i = 0; i < n; ++i) {
    // D_{i+1} sits at global qubit i, i.e. bit n-1-i of the basis index.
    psi[static_cast<Eigen::Index>(std::uint64_t{1} << (n - 1 - i))] = alpha[i];
  }
  return QuantumState::from_amplitudes(layout, std::move(psi));
}

QuantumState binary_state(std::span<const cplx> alpha, const std::string& reg) {
  const int k = log2_exact(alpha.size());
  Eigen::VectorXcd psi(static_cast<Eigen::Index>(alpha.size()));
  for (std::size_t i = 0; i < alpha.size(); ++i) psi[static_cast<Eigen::Index>(i)] = alpha[i];
  return QuantumState::from_amplitudes(RegisterLayout{{reg, k}}, std::move(psi));
}

CompressionResult compress_unary(const QuantumState& memory) {
  const std::uint64_t n = memory.layout().registers().size();
  if (n < 2 || !is_power_of_two(n)) throw LayoutError("memory must hold N = 2^k >= 2 cells");
  const auto names = cell_names(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = memory.layout().registers()[i];
    if (r.name != names[i] || r.width != 1)
      throw LayoutError("memory registers must be single-qubit cells D1..DN, got " +
                        memory.layout().describe());
  }
  const int k = log2_exact(n);
  const QuantumState q1 = QuantumState::basis(RegisterLayout{{"Q1", k}}, std::uint64_t{0});
  const QuantumState q2 = QuantumState::basis(RegisterLayout{{"Q2", 1}}, std::uint64_t{0});
  const QuantumState joint = tensor(tensor(q1, q2), memory);
  require_subspace(joint, {}, SubspacePolicy::single_excitation);

  QuantumState after = compression_circuit(joint, SubspacePolicy::permissive);

  std::vector<std::pair<std::string, std::uint64_t>> fixed{{"Q2", 1}};
  for (const auto& name : names) fixed.emplace_back(name, 0);
  auto branch = condition_on(after, fixed);
  if (std::abs(1.0 - branch.probability) > kTolerances.subspace)
    throw SubspaceViolation("compression left weight outside |1⟩_Q2 ⊗ |0..0⟩_D",
                            1.0 - branch.probability);
  const double purity = partial_trace(after, {"Q1"}).purity();
  return {std::move(branch.state), QuantumState::basis(RegisterLayout{{"Q2", 1}}, std::uint64_t{1}),
          std::move(after), purity};
}

QuantumState decompress(const QuantumState& binary, std::uint64_t n) {
  const int k = log2_exact(n);
  if (n < 2) throw ConfigError("decompress needs N >= 2");
  if (binary.num_qubits() != k)
    throw LayoutError("binary register must have log2 N = " + std::to_string(k) + " qubits");
  std::vector<Register> regs{{"Q1", k}, {"Q2", 1}};
  for (const auto& name : cell_names(n)) regs.push_back({name, 1});
  RegisterLayout layout(std::move(regs));
  check_qubit_cap(layout, binary.kind());

  const QuantumState q1 = binary.with_layout(RegisterLayout{{"Q1", k}});
  const QuantumState q2 = QuantumState::basis(RegisterLayout{{"Q2", 1}}, std::uint64_t{1});
  std::vector<Register> mem_regs;
  for (const auto& name : cell_names(n)) mem_regs.push_back({name, 1});
  const QuantumState mem = QuantumState::basis(RegisterLayout(std::move(mem_regs)), std::uint64_t{0});
  QuantumState joint = tensor(tensor(q1, q2), mem);

  joint = quantum_query_swap(joint);
  joint = encode_address_U(joint, SubspacePolicy::permissive);
  auto branch = condition_on(joint, {{"Q1", 0}, {"Q2", 0}});
  if (std::abs(1.0 - branch.probability) > kTolerances.subspace)
    throw SubspaceViolation("decompression did not clear the address and flag registers",
                            1.0 - branch.probability);
  return std::move(branch.state);
}

}  // namespace qdc::qram
