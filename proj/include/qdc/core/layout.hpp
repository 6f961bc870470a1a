#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qdc {

struct Register {
  std::string name;
  int width = 1;
  bool operator==(const Register&) const = default;
};

// Position of a register inside a basis index. Qubit ordering is
// register-major with the first listed register most significant.
struct BitField {
  int shift = 0;
  int width = 0;

  std::uint64_t low_mask() const { return (std::uint64_t{1} << width) - 1; }
  std::uint64_t mask() const { return low_mask() << shift; }
  std::uint64_t get(std::uint64_t index) const { return (index >> shift) & low_mask(); }
  std::uint64_t with(std::uint64_t index, std::uint64_t value) const {
    return (index & ~mask()) | ((value & low_mask()) << shift);
  }
};

class RegisterLayout {
 public:
  RegisterLayout() = default;
  RegisterLayout(std::initializer_list<Register> regs);
  explicit RegisterLayout(std::vector<Register> regs);

  const std::vector<Register>& registers() const { return regs_; }
  std::vector<std::string> names() const;
  int total_qubits() const { return total_; }
  std::uint64_t dimension() const { return std::uint64_t{1} << total_; }

  bool contains(std::string_view name) const;
  const Register& at(std::string_view name) const;
  int width(std::string_view name) const { return at(name).width; }
  // Global index of the register's most significant qubit.
  int offset(std::string_view name) const;
  // Global qubit index of `bit` within the register, bit 0 being its MSB.
  int qubit(std::string_view name, int bit = 0) const;
  BitField field(std::string_view name) const;
  // Bit shift of a global qubit index inside a basis index.
  int shift_of_qubit(int qubit) const { return total_ - 1 - qubit; }

  // Sub-layout containing the named registers, kept in this layout's order.
  RegisterLayout select(std::span<const std::string> names) const;
  RegisterLayout without(std::span<const std::string> names) const;
  RegisterLayout operator+(const RegisterLayout& other) const;

  std::string describe() const;
  bool operator==(const RegisterLayout&) const = default;

 private:
  std::vector<Register> regs_;
  int total_ = 0;
};

std::string to_bitstring(std::uint64_t value, int width);
std::uint64_t parse_bitstring(std::string_view bits);

// Helpers for the D_1..D_N memory naming used throughout the QRAM code.
std::string cell_name(std::uint64_t address, std::string_view prefix = "D");
std::vector<std::string> cell_names(std::uint64_t count, std::string_view prefix = "D");

bool is_power_of_two(std::uint64_t n);
int log2_exact(std::uint64_t n);

}  // namespace qdc
