// One line per acceptance criterion; exits non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "oracle.hpp"
#include "qdc/ft.hpp"
#include "qdc/netsim.hpp"
#include "qdc/privacy.hpp"
#include "qdc/qram.hpp"
#include "qdc/sensing.hpp"

using namespace qdc;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("FAILED ") + what;
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// ---- 1 --------------------------------------------------------------------

Verdict qram_semantics() {
  Verdict v;
  oracle::Gen gen(101);
  double worst = 0.0;
  qram::QueryOptions permissive;
  permissive.permissive = true;
  for (int k : {1, 2}) {
    for (int w : {1, 2}) {
      std::vector<std::uint64_t> data(std::uint64_t{1} << k);
      for (auto& x : data) x = gen.below(std::uint64_t{1} << w);
      const auto db = qram::QramInstance::classical(data, w);
      const RegisterLayout ql{{"Q1", k}, {"Q2", w}};
      const auto cmap = oracle::classical_query_map(data, k, w);
      const Eigen::MatrixXcd u = oracle::permutation(k + w, cmap);
      for (std::uint64_t i = 0; i < ql.dimension(); ++i) {
        const auto col = qram::classical_query(QuantumState::basis(ql, i), db, permissive).amplitudes();
        worst = std::max(worst, (col - u.col(static_cast<Eigen::Index>(i))).norm());
      }
      std::vector<Register> regs{{"Q1", k}, {"Q2", w}};
      for (const auto& name : cell_names(data.size())) regs.push_back({name, w});
      const RegisterLayout sl(std::move(regs));
      const int n = sl.total_qubits();
      const auto smap = oracle::swap_query_map(k, w);
      for (std::uint64_t i = 0; i < sl.dimension(); ++i) {
        const auto out = qram::quantum_query_swap(QuantumState::basis(sl, i));
        worst = std::max(worst, 1.0 - out.probability(oracle::index_of(smap(oracle::bits_of(i, n)))));
      }
      for (int t = 0; t < 100; ++t) {
        Eigen::VectorXcd a = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(ql.dimension()));
        const Eigen::VectorXcd addr = gen.state(Eigen::Index{1} << k);
        for (Eigen::Index x = 0; x < addr.size(); ++x) a[x << w] = addr[x];
        const auto psi = QuantumState::from_amplitudes(ql, a);
        worst = std::max(worst, (qram::classical_query(psi, db).amplitudes() - u * a).norm());
        const auto phi = QuantumState::from_amplitudes(sl, gen.state(static_cast<Eigen::Index>(sl.dimension())));
        worst = std::max(worst, (qram::quantum_query_swap(phi).amplitudes() -
                                 oracle::apply_permutation(phi.amplitudes(), n, smap)).norm());
      }
    }
  }
  v.require(worst < 1e-10, "discrepancy " + fmt(worst));
  v.note("max discrepancy " + fmt(worst));
  return v;
}

// ---- 2 --------------------------------------------------------------------

Verdict compression() {
  Verdict v;
  oracle::Gen gen(202);
  double worst_f = 1.0, worst_purity = 1.0, worst_rt = 1.0;
  for (std::uint64_t n : {2, 4, 8, 16}) {
    for (int t = 0; t < 100; ++t) {
      const Eigen::VectorXcd alpha = gen.state(static_cast<Eigen::Index>(n));
      const std::vector<cplx> a(alpha.data(), alpha.data() + alpha.size());
      const auto memory = qram::unary_state(a);
      const auto r = qram::compress_unary(memory);
      worst_f = std::min(worst_f, oracle::overlap2(r.binary.amplitudes(), alpha));
      worst_purity = std::min(worst_purity, r.binary_purity);
      worst_rt = std::min(worst_rt, fidelity(qram::decompress(r.binary, n), memory));
    }
  }
  v.require(worst_f >= 1 - 1e-10, "binary fidelity " + fmt(worst_f));
  v.require(worst_purity >= 1 - 1e-10, "Q1 purity " + fmt(worst_purity));
  v.require(worst_rt >= 1 - 1e-10, "round trip " + fmt(worst_rt));
  v.note("min fidelity 1-" + fmt(1 - worst_f) + ", min purity 1-" + fmt(1 - worst_purity) +
         ", min round trip 1-" + fmt(1 - worst_rt));
  return v;
}

// ---- 3 --------------------------------------------------------------------

Verdict estimator_arithmetic() {
  Verdict v;
  ft::FtCostParams prm;  // 1e8 T gates, p = 1e-3, f_outsourced = 0.99
  const auto with = ft::estimate_with_qdc(prm, 1 << 10, ft::DelayModel::sqrt);
  v.require(with.states == 1'000'000, "user-side states " + std::to_string(with.states));
  const double mass = static_cast<double>(with.states) * ft::distillation_failure(prm.p, 1);
  v.require(std::abs(mass - 0.035) < 1e-15, "level-1 mass " + fmt(mass));
  v.require(std::abs(std::log10(mass / 0.01)) < 1.0, "order of magnitude vs 0.01");
  const double without_mass = 1e8 * ft::distillation_failure(prm.p, 1);
  v.require(std::abs(without_mass - 3.5) < 1e-12 && without_mass > prm.budget, "without-QDC level-1 mass");
  const auto without = ft::estimate_without_qdc(prm);
  v.require(without.chosen_level >= 2, "without-QDC level " + std::to_string(without.chosen_level));
  v.note("user states " + std::to_string(with.states) + ", level-1 mass " + fmt(mass) +
         ", without-QDC mass " + fmt(without_mass) + " -> level " +
         std::to_string(without.chosen_level));
  return v;
}

// ---- 4 --------------------------------------------------------------------

Verdict relative_cost_shape() {
  Verdict v;
  ft::FtCostParams prm;
  const auto ns = ft::powers_of_two(4, 20);
  const auto rows = ft::sweep(prm, ns);
  bool complete = true, ordered = true, monotone = true, jump = false;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].ratio_sqrt || !rows[i].ratio_log) {
      complete = false;
      continue;
    }
    ordered = ordered && *rows[i].ratio_log <= *rows[i].ratio_sqrt;
    if (i == 0 || !rows[i - 1].ratio_sqrt || !rows[i - 1].ratio_log) continue;
    monotone = monotone && *rows[i].ratio_sqrt >= *rows[i - 1].ratio_sqrt &&
               *rows[i].ratio_log >= *rows[i - 1].ratio_log;
    // A jump: the ratio grows by more than the delay factor alone explains,
    // exactly where the with-QDC distance steps up.
    const double smooth = (1 + prm.kappa * std::sqrt(static_cast<double>(rows[i].n))) /
                          (1 + prm.kappa * std::sqrt(static_cast<double>(rows[i - 1].n)));
    if (rows[i].d_with > rows[i - 1].d_with && *rows[i].ratio_sqrt / *rows[i - 1].ratio_sqrt > smooth * (1 + 1e-9))
      jump = true;
  }
  v.require(complete, "every row feasible");
  v.require(ordered, "ratio_log <= ratio_sqrt");
  v.require(monotone, "nondecreasing ratios");
  v.require(jump, "jump at a d_with increment");
  std::string crossings;
  for (double t : ft::kThresholds) {
    ft::FtCostParams p = prm;
    p.kappa = ft::threshold_preset_kappa(prm, t);
    const auto r = ft::sweep(p, ns);
    auto crosses = [&](auto get) {
      for (std::size_t i = 1; i < r.size(); ++i)
        if (get(r[i - 1]) < t && get(r[i]) >= t) return true;
      return false;
    };
    const bool s = crosses([](const ft::SweepRow& x) { return x.ratio_sqrt.value_or(0.0); });
    const bool l = crosses([](const ft::SweepRow& x) { return x.ratio_log.value_or(0.0); });
    v.require(s && l, "crossing of threshold " + fmt(t));
    crossings += (crossings.empty() ? "" : ", ") + fmt(t) + "@kappa=" + fmt(p.kappa);
  }
  v.note("17 rows ordered and monotone, jump found, crossings " + crossings);
  return v;
}

// ---- 5 --------------------------------------------------------------------

Verdict privacy_properties() {
  Verdict v;
  oracle::Gen gen(505);
  double worst_marginal = 0.0;
  for (int t = 0; t < 20; ++t) {
    const auto a = QuantumState::from_amplitudes(RegisterLayout{{"S", 1}}, gen.state(2));
    const auto b = QuantumState::from_amplitudes(RegisterLayout{{"S", 1}}, gen.state(2));
    for (int s : {0, 1})
      worst_marginal = std::max(worst_marginal,
                                trace_distance(privacy::share_view(a, 2, {s}), privacy::share_view(b, 2, {s})));
  }
  v.require(worst_marginal < 1e-10, "share marginal distance " + fmt(worst_marginal));

  privacy::SessionConfig cfg;
  cfg.seed = 17;
  const auto honest = privacy::run_session(cfg);
  double min_f = 1.0, max_back = 0.0;
  for (const auto& d : honest.delivered) min_f = std::min(min_f, d.fidelity);
  for (double b : honest.backreactions) max_back = std::max(max_back, b);
  v.require(std::abs(1 - min_f) < 1e-9, "honest fidelity " + fmt(min_f));
  v.require(max_back < 1e-10, "backreaction " + fmt(max_back));
  v.require(!honest.backreactions.empty(), "swap reads happened");

  cfg.adversary.kind = privacy::AdversaryKind::colluding;
  cfg.adversary.colluders = {0, 1};
  cfg.privacy_metrics = false;
  const auto colluding = privacy::run_session(cfg);
  double min_c = colluding.colluder_fidelities.empty() ? 0.0 : 1.0;
  for (const auto& [sender, f] : colluding.colluder_fidelities) min_c = std::min(min_c, f);
  v.require(std::abs(1 - min_c) < 1e-9, "colluder fidelity " + fmt(min_c));
  v.note("marginal distance " + fmt(worst_marginal) + ", delivered 1-" + fmt(1 - min_f) + ", backreaction " +
         fmt(max_back) + ", colluders 1-" + fmt(1 - min_c));
  return v;
}

// ---- 6 --------------------------------------------------------------------

double exact_detection(const std::vector<std::uint64_t>& data, int w, std::uint64_t j) {
  const int k = static_cast<int>(std::log2(static_cast<double>(data.size())));
  const Eigen::Index dim = Eigen::Index{1} << (k + w);
  Eigen::VectorXcd decoy = Eigen::VectorXcd::Zero(dim);
  decoy[0] += 1.0;
  decoy[static_cast<Eigen::Index>(j << w)] += 1.0;
  decoy.normalize();
  Eigen::MatrixXcd rho = decoy * decoy.adjoint();
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c)
      if ((r >> w) != (c >> w)) rho(r, c) = 0.0;  // server measured Q1
  const Eigen::MatrixXcd u = oracle::permutation(k + w, oracle::classical_query_map(data, k, w));
  const Eigen::VectorXcd expected = u * decoy;
  return 1.0 - (expected.adjoint() * u * rho * u.adjoint() * expected)(0, 0).real();
}

Verdict cheat_detection() {
  Verdict v;
  const std::vector<std::uint64_t> data{1, 0, 1, 1};
  const auto db = qram::QramInstance::classical(data, 1);
  const int trials = 10'000;
  Rng rng(606);
  double expected = 0.0;
  int caught = 0;
  int false_positives = 0;
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t j = rng.below(4);
    expected += exact_detection(data, 1, j) / trials;
    caught += privacy::qpq_query(j, db, privacy::AdversaryKind::measuring, rng).verified ? 0 : 1;
    false_positives += privacy::qpq_query(j, db, privacy::AdversaryKind::honest, rng).verified ? 0 : 1;
  }
  const double freq = caught / static_cast<double>(trials);
  const double sigma = std::sqrt(expected * (1 - expected) / trials);
  v.require(std::abs(freq - expected) <= 3 * sigma, "detection " + fmt(freq) + " vs " + fmt(expected));
  v.require(false_positives == 0, "honest false positives " + std::to_string(false_positives));
  v.note("detection " + fmt(freq) + " vs exact " + fmt(expected) + " (3 sigma " + fmt(3 * sigma) +
         "), honest false positives " + std::to_string(false_positives));
  return v;
}

// ---- 7 --------------------------------------------------------------------

Verdict communication_cost() {
  Verdict v;
  const int w = 1;
  double ratio = 0.0;
  for (int k : {4, 10, 20}) {
    const std::uint64_t n = std::uint64_t{1} << k;
    std::vector<std::uint64_t> data(n);
    for (std::uint64_t i = 0; i < n; ++i) data[i] = i & 1U;
    netsim::Network net(707);
    net.add_user("user");
    net.add_node(netsim::QdcNode{"qdc", qram::QramInstance::classical(std::move(data), w), 0.0, 1.0, 1.0, false, 0.0});
    net.connect("user", "qdc");
    net.distribute_epr("user", "qdc", 4 * static_cast<std::uint64_t>(k + w));
    net.set_event_logging(false);
    const std::uint64_t address = n - 1;
    const auto q = QuantumState::basis(RegisterLayout{{"Q1", k}, {"Q2", w}}, address << w);
    const auto out = net.outsourced_query("user", "qdc", q, netsim::QueryMode::classical);
    const auto shipped = net.naive_magic_shipping("user", "qdc", n);
    const auto want_q = static_cast<std::uint64_t>(2 * (k + w));
    const auto want_m = static_cast<std::uint64_t>(std::ceil(std::sqrt(static_cast<double>(n))));
    v.require(out.delta.qubits_teleported == want_q, "outsourced qubits at N=2^" + std::to_string(k));
    v.require(shipped.qubits_teleported == want_m, "naive qubits at N=2^" + std::to_string(k));
    v.require(out.registers.probability((address << w) | 1U) > 1 - 1e-12, "answer at N=2^" + std::to_string(k));
    ratio = static_cast<double>(out.delta.qubits_teleported) / static_cast<double>(shipped.qubits_teleported);
  }
  v.require(ratio < 0.05, "ratio at 2^20 " + fmt(ratio));
  v.note("2^20: 42 vs 1024 qubits, ratio " + fmt(ratio));
  return v;
}

// ---- 8 --------------------------------------------------------------------

Verdict sensing_checks() {
  Verdict v;
  std::string est;
  for (double phi : {0.0, std::numbers::pi / 2, 1.0}) {
    sensing::PhaseEstimationConfig cfg;
    cfg.phi_true = phi;
    cfg.shots = 10'000;
    cfg.seed = 808;
    const auto r = sensing::phase_estimation_run(cfg);
    v.require(std::abs(r.phi_est - phi) <= 0.05, "phi " + fmt(phi) + " estimate " + fmt(r.phi_est));
    v.require(r.pairs_consumed_per_event == 3, "pairs per event for N=4");
    est += (est.empty() ? "" : ", ") + fmt(phi) + "->" + fmt(r.phi_est) + " (rmse " + fmt(r.rmse) + ")";
  }
  for (int bins : {2, 8}) {
    sensing::PhaseEstimationConfig cfg;
    cfg.bins = bins;
    cfg.shots = 50;
    cfg.trials = 1;
    const auto r = sensing::phase_estimation_run(cfg);
    v.require(r.pairs_consumed_per_event == static_cast<std::uint64_t>(log2_exact(static_cast<std::uint64_t>(bins)) + 1),
              "pairs per event for N=" + std::to_string(bins));
  }
  const auto c = sensing::hardware_cost(4, 256);
  v.require(c.qubits_reference == 32 && c.qubits_qdc == 12, "hardware_cost(4, 256)");
  v.note(est + "; hardware (32, 12)");
  return v;
}

// ---- 9 --------------------------------------------------------------------

std::string run_cli(const std::vector<std::string>& args, int& code) {
  std::vector<std::string> full{"qdc"};
  full.insert(full.end(), args.begin(), args.end());
  std::ostringstream out, err;
  code = cli::run(full, out, err);
  return out.str() + "\x1f" + err.str();
}

Verdict determinism() {
  Verdict v;
  const std::vector<std::vector<std::string>> commands{
      {"--seed", "9", "estimate"},
      {"--seed", "9", "--format", "json", "estimate", "--delay-model", "log"},
      {"--seed", "9", "qram"},
      {"--seed", "9", "--format", "csv", "qram", "--demo", "compress", "--n", "8"},
      {"--seed", "9", "protocol", "--adversary", "measuring", "--sessions", "20"},
      {"--seed", "9", "--format", "csv", "protocol", "--senders", "3", "--receivers", "2", "--qdcs", "3",
       "--loss", "0.2"},
      {"--seed", "9", "sense", "--shots", "2000"},
      {"--seed", "9", "--format", "csv", "sense", "--loss", "0.1", "--shots", "1000"}};
  for (const auto& c : commands) {
    int a = 0, b = 0;
    const auto first = run_cli(c, a);
    const auto second = run_cli(c, b);
    std::string label;
    for (const auto& s : c) label += s + " ";
    v.require(a == 0 && b == 0, "exit code for " + label);
    v.require(first == second, "identical output for " + label);
  }
  v.note(std::to_string(commands.size()) + " commands re-run byte-identically");
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"qram-semantics", qram_semantics},
      {"compression", compression},
      {"estimator-arithmetic", estimator_arithmetic},
      {"relative-cost-shape", relative_cost_shape},
      {"privacy", privacy_properties},
      {"cheat-detection", cheat_detection},
      {"communication-cost", communication_cost},
      {"sensing", sensing_checks},
      {"determinism", determinism}};
  const std::vector<double> budgets{10, 30, 1, 10, 60, 60, 1, 60, 60};

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    v.require(secs < budgets[i], "runtime " + fmt(secs) + " s over " + fmt(budgets[i]) + " s");
    failures += v.pass ? 0 : 1;
    std::printf("%s %zu %-22s %6.2fs  %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), secs,
                v.detail.c_str());
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failures), criteria.size());
  return failures == 0 ? 0 : 1;
}
