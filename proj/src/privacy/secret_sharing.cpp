#include <algorithm>
#include <set>

#include "qdc/privacy.hpp"

namespace qdc::privacy {

namespace {

int pad_bit(std::uint64_t key, int width, int q, int which) {
  return static_cast<int>((key >> (2 * width - 1 - 2 * q - which)) & 1U);
}

void check_key(const QuantumState& state, std::uint64_t key) {
  const int w = state.num_qubits();
  if (w < 1 || w > 8) throw ConfigError("padded states must have 1..8 qubits");
  if (key >> (2 * w)) throw ConfigError("pad key has more than 2w bits");
}

}  // namespace

QuantumState apply_pad(const QuantumState& state, std::uint64_t key) {
  check_key(state, key);
  const int w = state.num_qubits();
  QuantumState out = state;
  for (int q = 0; q < w; ++q) {
    if (pad_bit(key, w, q, 1)) out = apply(out, GateOp::z(q));
    if (pad_bit(key, w, q, 0)) out = apply(out, GateOp::x(q));
  }
  return out;
}

QuantumState remove_pad(const QuantumState& state, std::uint64_t key) {
  check_key(state, key);
  const int w = state.num_qubits();
  QuantumState out = state;
  for (int q = 0; q < w; ++q) {
    if (pad_bit(key, w, q, 0)) out = apply(out, GateOp::x(q));
    if (pad_bit(key, w, q, 1)) out = apply(out, GateOp::z(q));
  }
  return out;
}

ShareSet qss_split(const QuantumState& secret, int n, Rng& rng) {
  if (n < 2) throw ConfigError("secret sharing needs n >= 2 shares");
  const int w = secret.num_qubits();
  if (w < 1 || w > 8) throw ConfigError("secrets must have 1..8 qubits");
  const std::uint64_t key_space = std::uint64_t{1} << (2 * w);
  const std::uint64_t key = rng.below(key_space);

  ShareSet set;
  set.n = n;
  set.width = w;
  std::uint64_t acc = 0;
  for (int s = 0; s < n; ++s) {
    Share share;
    share.index = s;
    share.key = s + 1 < n ? rng.below(key_space) : key ^ acc;
    acc ^= share.key;
    set.shares.push_back(std::move(share));
  }
  set.shares.front().quantum = apply_pad(secret, key);
  return set;
}

ShareSet qss_split(const QuantumState& secret, int n, std::uint64_t seed) {
  Rng rng(seed);
  return qss_split(secret, n, rng);
}

QuantumState qss_reconstruct(const ShareSet& set) {
  if (set.n < 2) throw ReconstructionError("share set has no valid threshold");
  std::vector<bool> seen(static_cast<std::size_t>(set.n), false);
  std::uint64_t key = 0;
  const QuantumState* padded = nullptr;
  for (const auto& share : set.shares) {
    if (share.index < 0 || share.index >= set.n || seen[static_cast<std::size_t>(share.index)])
      throw ReconstructionError("share index " + std::to_string(share.index) + " is invalid or repeated");
    seen[static_cast<std::size_t>(share.index)] = true;
    key ^= share.key;
    if (share.quantum) padded = &*share.quantum;
  }
  for (int s = 0; s < set.n; ++s)
    if (!seen[static_cast<std::size_t>(s)])
      throw ReconstructionError("share " + std::to_string(s) + " of " + std::to_string(set.n) +
                                " is missing; all shares are required");
  if (padded == nullptr) throw ReconstructionError("no share carries the quantum part");
  return remove_pad(*padded, key);
}

QuantumState share_view(const QuantumState& secret, int n, const std::vector<int>& subset) {
  if (n < 2) throw ConfigError("secret sharing needs n >= 2 shares");
  const std::set<int> held(subset.begin(), subset.end());
  if (held.empty() || held.size() != subset.size() || *held.begin() < 0 || *held.rbegin() >= n)
    throw ConfigError("share subset must list distinct indices in [0, n)");
  const int w = secret.num_qubits();
  const bool quantum = held.contains(0);

  std::vector<Register> regs;
  if (quantum) regs.push_back({"S", w});
  for (int s : held) regs.push_back({"K" + std::to_string(s), 2 * w});
  const RegisterLayout layout(regs);
  check_qubit_cap(layout, StateKind::mixed);

  const int key_bits = 2 * w;
  const int free_bits = key_bits * n;  // pad plus n-1 free key parts
  if (free_bits > 20) throw ConfigError("share view enumeration too large");
  const std::uint64_t combos = std::uint64_t{1} << free_bits;
  const std::uint64_t key_mask = (std::uint64_t{1} << key_bits) - 1;
  const QuantumState relabeled = secret.with_layout(RegisterLayout{{"S", w}});

  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(layout.dimension()),
                                                static_cast<Eigen::Index>(layout.dimension()));
  for (std::uint64_t c = 0; c < combos; ++c) {
    const std::uint64_t pad = c & key_mask;
    std::vector<std::uint64_t> parts(static_cast<std::size_t>(n));
    std::uint64_t x = 0;
    for (int s = 0; s + 1 < n; ++s) {
      parts[static_cast<std::size_t>(s)] = (c >> (key_bits * (s + 1))) & key_mask;
      x ^= parts[static_cast<std::size_t>(s)];
    }
    parts.back() = pad ^ x;

    std::uint64_t classical = 0;
    for (int s : held) classical = (classical << key_bits) | parts[static_cast<std::size_t>(s)];
    const auto held_keys = static_cast<int>(held.size()) * key_bits;
    if (quantum) {
      const Eigen::MatrixXcd rho = apply_pad(relabeled, pad).density_matrix();
      const Eigen::Index stride = Eigen::Index{1} << held_keys;
      const auto k = static_cast<Eigen::Index>(classical);
      for (Eigen::Index r = 0; r < rho.rows(); ++r)
        for (Eigen::Index col = 0; col < rho.cols(); ++col) acc(r * stride + k, col * stride + k) += rho(r, col);
    } else {
      const auto k = static_cast<Eigen::Index>(classical);
      acc(k, k) += 1.0;
    }
  }
  acc /= static_cast<double>(combos);
  return QuantumState::from_density(layout, std::move(acc));
}

}  // namespace qdc::privacy
