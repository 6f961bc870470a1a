#include "qdc/qram.hpp"

namespace qdc::qram {

QuantumState classical_query(const QuantumState& state, const QramInstance& db,
                             const QueryOptions& options) {
  if (db.mode() != DataMode::classical) throw PreconditionError("classical_query needs classical data");
  const auto& layout = state.layout();
  const BitField addr = layout.field(options.regs.address);
  const BitField out = layout.field(options.regs.output);
  if (addr.width != db.address_width())
    throw LayoutError("address register has width " + std::to_string(addr.width) + ", expected log2 N = " +
                      std::to_string(db.address_width()));
  if (out.width != db.word_width())
    throw LayoutError("output register has width " + std::to_string(out.width) + ", expected w = " +
                      std::to_string(db.word_width()));

  if (!options.permissive) {
    const double dirty = weight_where(state, [&](std::uint64_t i) { return out.get(i) != 0; });
    if (dirty > kTolerances.subspace)
      throw PreconditionError("output register is not cleared (weight " + std::to_string(dirty) +
                              " outside |0⟩)");
  }
  const auto& data = db.data();
  return permute_basis(state, [&](std::uint64_t i) {
    return out.with(i, out.get(i) ^ data[addr.get(i)]);
  });
}

QuantumState quantum_query_swap(const QuantumState& state, const QueryOptions& options) {
  const auto& layout = state.layout();
  const BitField addr = layout.field(options.regs.address);
  const BitField out = layout.field(options.regs.output);
  const std::uint64_t n = std::uint64_t{1} << addr.width;
  std::vector<BitField> cells;
  cells.reserve(n);
  for (const auto& name : cell_names(n, options.regs.cell_prefix)) {
    const BitField f = layout.field(name);
    if (f.width != out.width)
      throw LayoutError("cell " + name + " has width " + std::to_string(f.width) +
                        " but the output register has width " + std::to_string(out.width));
    cells.push_back(f);
  }
  return permute_basis(state, [&](std::uint64_t i) {
    const BitField& cell = cells[addr.get(i)];
    const std::uint64_t q2 = out.get(i);
    const std::uint64_t d = cell.get(i);
    return cell.with(out.with(i, d), q2);
  });
}

}  // namespace qdc::qram
