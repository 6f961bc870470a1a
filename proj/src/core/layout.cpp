#include "qdc/core/layout.hpp"

#include <algorithm>
#include <bit>

#include "qdc/core/errors.hpp"

namespace qdc {

RegisterLayout::RegisterLayout(std::initializer_list<Register> regs)
    : RegisterLayout(std::vector<Register>(regs)) {}

RegisterLayout::RegisterLayout(std::vector<Register> regs) : regs_(std::move(regs)) {
  for (std::size_t i = 0; i < regs_.size(); ++i) {
    const auto& r = regs_[i];
    if (r.name.empty()) throw ConfigError("register name must be non-empty");
    if (r.width < 1) throw ConfigError("register '" + r.name + "' must have width >= 1");
    for (std::size_t j = 0; j < i; ++j)
      if (regs_[j].name == r.name) throw ConfigError("duplicate register name '" + r.name + "'");
    total_ += r.width;
  }
  if (total_ > 62) throw ConfigError("layout exceeds 62 qubits");
}

std::vector<std::string> RegisterLayout::names() const {
  std::vector<std::string> out;
  out.reserve(regs_.size());
  for (const auto& r : regs_) out.push_back(r.name);
  return out;
}

bool RegisterLayout::contains(std::string_view name) const {
  return std::any_of(regs_.begin(), regs_.end(), [&](const Register& r) { return r.name == name; });
}

const Register& RegisterLayout::at(std::string_view name) const {
  for (const auto& r : regs_)
    if (r.name == name) return r;
  throw LayoutError("no register named '" + std::string(name) + "' in layout " + describe());
}

int RegisterLayout::offset(std::string_view name) const {
  int off = 0;
  for (const auto& r : regs_) {
    if (r.name == name) return off;
    off += r.width;
  }
  throw LayoutError("no register named '" + std::string(name) + "' in layout " + describe());
}

int RegisterLayout::qubit(std::string_view name, int bit) const {
  const int w = width(name);
  if (bit < 0 || bit >= w)
    throw IndexError("bit " + std::to_string(bit) + " out of range for register '" +
                     std::string(name) + "'");
  return offset(name) + bit;
}

BitField RegisterLayout::field(std::string_view name) const {
  const int off = offset(name);
  const int w = width(name);
  return BitField{total_ - off - w, w};
}

RegisterLayout RegisterLayout::select(std::span<const std::string> names) const {
  for (const auto& n : names) (void)at(n);
  std::vector<Register> out;
  for (const auto& r : regs_)
    if (std::find(names.begin(), names.end(), r.name) != names.end()) out.push_back(r);
  return RegisterLayout(std::move(out));
}

RegisterLayout RegisterLayout::without(std::span<const std::string> names) const {
  for (const auto& n : names) (void)at(n);
  std::vector<Register> out;
  for (const auto& r : regs_)
    if (std::find(names.begin(), names.end(), r.name) == names.end()) out.push_back(r);
  return RegisterLayout(std::move(out));
}

RegisterLayout RegisterLayout::operator+(const RegisterLayout& other) const {
  std::vector<Register> out = regs_;
  out.insert(out.end(), other.regs_.begin(), other.regs_.end());
  return RegisterLayout(std::move(out));
}

std::string RegisterLayout::describe() const {
  std::string s = "{";
  for (std::size_t i = 0; i < regs_.size(); ++i) {
    if (i) s += ",";
    s += regs_[i].name + ":" + std::to_string(regs_[i].width);
  }
  return s + "}";
}

std::string to_bitstring(std::uint64_t value, int width) {
  std::string s(static_cast<std::size_t>(width), '0');
  for (int b = 0; b < width; ++b)
    if ((value >> (width - 1 - b)) & 1U) s[static_cast<std::size_t>(b)] = '1';
  return s;
}

std::uint64_t parse_bitstring(std::string_view bits) {
  if (bits.size() > 62) throw ConfigError("bitstring too long");
  std::uint64_t v = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw ConfigError("bitstring may only contain '0' and '1'");
    v = (v << 1) | static_cast<std::uint64_t>(c == '1');
  }
  return v;
}

std::string cell_name(std::uint64_t address, std::string_view prefix) {
  return std::string(prefix) + std::to_string(address + 1);
}

std::vector<std::string> cell_names(std::uint64_t count, std::string_view prefix) {
  std::vector<std::string> out;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) out.push_back(cell_name(i, prefix));
  return out;
}

bool is_power_of_two(std::uint64_t n) { return n != 0 && std::has_single_bit(n); }

int log2_exact(std::uint64_t n) {
  if (!is_power_of_two(n)) throw ConfigError(std::to_string(n) + " is not a power of two");
  return std::countr_zero(n);
}

}  // namespace qdc
