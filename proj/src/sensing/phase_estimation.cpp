#include <cmath>
#include <algorithm>
#include <limits>
#include <numbers>

#include "qdc/netsim.hpp"
#include "qdc/qram.hpp"
#include "qdc/sensing.hpp"

namespace qdc::sensing {

namespace {

void check_bins(int bins) {
  if (bins < 2 || bins > 8 || !is_power_of_two(static_cast<std::uint64_t>(bins)))
    throw ConfigError("bins must be a power of two in [2, 8]");
}

QuantumState compress_site(const QuantumState& state, const std::string& address, const std::string& flag,
                           const std::string& prefix, std::uint64_t bins) {
  const qram::QueryRegisters regs{address, flag, prefix};
  const QuantumState after = qram::compression_circuit(state, qram::SubspacePolicy::allow_vacuum, regs);
  std::vector<std::pair<std::string, std::uint64_t>> cleared;
  for (const auto& name : cell_names(bins, prefix)) cleared.emplace_back(name, 0);
  auto kept = condition_on(after, cleared);
  if (std::abs(1.0 - kept.probability) > kTolerances.subspace)
    throw SubspaceViolation("site compression left excitations in memory", 1.0 - kept.probability);
  return kept.state;
}

}  // namespace

QuantumState compressed_pair(double phi, int bins, int bin) {
  check_bins(bins);
  if (bin < 0 || bin >= bins) throw IndexError("bin out of range");
  const auto n = static_cast<std::uint64_t>(bins);
  const int k = log2_exact(n);

  std::vector<Register> regs{{"AL", k}, {"FL", 1}};
  for (const auto& name : cell_names(n, "L")) regs.push_back({name, 1});
  for (const auto& name : cell_names(n, "R")) regs.push_back({name, 1});
  const RegisterLayout layout(regs);
  const BitField lb = layout.field(cell_name(static_cast<std::uint64_t>(bin), "L"));
  const BitField rb = layout.field(cell_name(static_cast<std::uint64_t>(bin), "R"));
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(layout.dimension()));
  psi[static_cast<Eigen::Index>(lb.with(0, 1))] = 1.0 / std::numbers::sqrt2;
  psi[static_cast<Eigen::Index>(rb.with(0, 1))] = std::polar(1.0 / std::numbers::sqrt2, phi);

  QuantumState left_done = compress_site(QuantumState::from_amplitudes(layout, std::move(psi)), "AL", "FL", "L", n);
  const QuantumState with_right = tensor(left_done, QuantumState::basis(RegisterLayout{{"AR", k}, {"FR", 1}}, std::uint64_t{0}));
  return compress_site(with_right, "AR", "FR", "R", n);
}

QuantumState interfere(const QuantumState& compressed) {
  const auto& l = compressed.layout();
  const int k = l.width("AL");
  QuantumState s = compressed;
  for (int j = 0; j < k; ++j) s = apply(s, GateOp::cnot(l.qubit("AR", j), l.qubit("AL", j)));
  for (int j = 0; j < k; ++j) s = apply(s, GateOp::toffoli(l.qubit("FR"), l.qubit("AL", j), l.qubit("AR", j)));
  s = apply(s, GateOp::cnot(l.qubit("FL"), l.qubit("FR")));
  return apply(s, GateOp::h(l.qubit("FL")));
}

double mle_phase(std::uint64_t zeros, std::uint64_t ones) {
  constexpr int kGrid = 1024;
  double best = -std::numeric_limits<double>::infinity();
  double best_phi = 0.0;
  for (int m = 0; m <= kGrid / 2; ++m) {
    const double phi = 2.0 * std::numbers::pi * m / kGrid;
    const double p0 = std::clamp(0.5 * (1.0 + std::cos(phi)), 0.0, 1.0);
    auto term = [](std::uint64_t count, double p) {
      if (count == 0) return 0.0;
      if (p <= 0.0) return -std::numeric_limits<double>::infinity();
      return static_cast<double>(count) * std::log(p);
    };
    const double ll = term(zeros, p0) + term(ones, 1.0 - p0);
    if (ll > best) {
      best = ll;
      best_phi = phi;
    }
  }
  return best_phi;
}

nlohmann::json PhaseEstimationResult::to_json() const {
  return {{"phi_true", phi_true},
          {"phi_est", phi_est},
          {"rmse", rmse},
          {"estimates", estimates},
          {"shots", shots},
          {"trials", estimates.size()},
          {"bins", bins},
          {"pairs_consumed_per_event", pairs_consumed_per_event},
          {"pairs_uncompressed_per_event", pairs_uncompressed_per_event},
          {"events", events},
          {"erasures", erasures},
          {"p0_exact", p0_exact}};
}

PhaseEstimationResult phase_estimation_run(const PhaseEstimationConfig& cfg) {
  check_bins(cfg.bins);
  if (cfg.shots < 1) throw ConfigError("shots must be >= 1");
  if (cfg.trials < 1) throw ConfigError("trials must be >= 1");
  if (!(cfg.phi_true >= 0.0 && cfg.phi_true <= std::numbers::pi))
    throw ConfigError("phi must lie in [0, pi]; the cosine estimator cannot resolve its sign");
  if (cfg.loss_probability < 0.0 || cfg.loss_probability >= 1.0) throw ConfigError("loss probability must lie in [0, 1)");

  const auto n = static_cast<std::uint64_t>(cfg.bins);
  const auto k = static_cast<std::uint64_t>(log2_exact(n));
  std::vector<QuantumState> prepared;
  PhaseEstimationResult out;
  for (int b = 0; b < cfg.bins; ++b) {
    prepared.push_back(compressed_pair(cfg.phi_true, cfg.bins, b));
    out.p0_exact += outcome_probabilities(interfere(prepared.back()), "FL")[0] / cfg.bins;
  }

  const Rng root(cfg.seed);
  double sq = 0.0;
  for (int trial = 0; trial < cfg.trials; ++trial) {
    Rng rng = root.split(static_cast<std::uint64_t>(2 * trial));
    netsim::Network net(root.split(static_cast<std::uint64_t>(2 * trial + 1)).next_u64());
    net.set_event_logging(false);
    net.add_user("L");
    net.add_user("R");
    net.connect("L", "R", cfg.loss_probability);

    std::uint64_t zeros = 0;
    for (std::uint64_t shot = 0; shot < cfg.shots; ++shot) {
      const auto bin = rng.below(n);
      net.distribute_epr("L", "R", k + 1);
      const auto delivered = net.teleport_registers("R", "L", prepared[bin], {"AR", "FR"});
      const double p0 = outcome_probabilities(interfere(delivered.state), "FL")[0];
      if (rng.uniform() < p0) ++zeros;
    }
    const double est = mle_phase(zeros, cfg.shots - zeros);
    out.estimates.push_back(est);
    sq += (est - cfg.phi_true) * (est - cfg.phi_true);
    out.events += cfg.shots;
    out.erasures += net.metrics().erasures;
    out.pairs_consumed_per_event = net.metrics().epr_consumed / cfg.shots;
  }
  out.phi_true = cfg.phi_true;
  out.phi_est = out.estimates.front();
  out.rmse = std::sqrt(sq / cfg.trials);
  out.shots = cfg.shots;
  out.bins = cfg.bins;
  out.pairs_uncompressed_per_event = n;
  return out;
}

}  // namespace qdc::sensing
